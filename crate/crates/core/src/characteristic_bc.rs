//! Subsonic inflow and non-reflecting outflow by the method of characteristics.
//!
//! Each boundary update fixes three quantities at the new time level: one
//! Riemann invariant carried from the interior along the outgoing
//! characteristic, one imposed from outside, and the entropy `S0`.
//!
//! The state is rebuilt from the deviations of the invariants from their
//! rest values, so a rest field with matching boundary data is reproduced
//! bit for bit.

use crate::error::{Error, Result};
use crate::gas::{
    conserved_from_primitive, primitive_from_conserved, sound_speed, ConservedState, GasModel, PrimitiveState,
};

/// Time dependence of a boundary signal.
#[derive(Debug, Clone, PartialEq)]
pub enum Waveform {
    /// `A sin(ω t)`.
    Sine { amplitude: f64, omega: f64 },
    /// `Σ a_k sin(k ω0 t + φ_k)`.
    MultiHarmonic { omega0: f64, harmonics: Vec<Harmonic> },
    /// Linear interpolation in a table sampled every `dtau` from `t = 0`.
    Sampled { dtau: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic {
    pub k: u32,
    pub amplitude: f64,
    pub phase: f64,
}

/// Whether the inflow imposes the pressure `p0 + s(t)` or the velocity `s(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Pressure,
    Velocity,
}

impl SignalKind {
    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::Pressure => "pressure",
            SignalKind::Velocity => "velocity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InflowSignal {
    kind: SignalKind,
    waveform: Waveform,
}

impl InflowSignal {
    pub fn new(kind: SignalKind, waveform: Waveform) -> Result<Self> {
        match &waveform {
            Waveform::Sine { amplitude, omega } => {
                if !(*omega > 0.0) || !omega.is_finite() || !amplitude.is_finite() {
                    return Err(Error::InvalidParameter(format!("sine needs a positive pulsation, got {omega}")));
                }
            }
            Waveform::MultiHarmonic { omega0, harmonics } => {
                if !(*omega0 > 0.0) || !omega0.is_finite() {
                    return Err(Error::InvalidParameter(format!("fundamental pulsation {omega0} must be positive")));
                }
                if harmonics.is_empty() {
                    return Err(Error::InvalidParameter("multi-harmonic signal without harmonics".into()));
                }
                if let Some(h) = harmonics.iter().find(|h| h.k == 0 || !h.amplitude.is_finite() || !h.phase.is_finite()) {
                    return Err(Error::InvalidParameter(format!("invalid harmonic {h:?}")));
                }
            }
            Waveform::Sampled { dtau, values } => {
                if !(*dtau > 0.0) || !dtau.is_finite() {
                    return Err(Error::InvalidParameter(format!("sample spacing {dtau} must be positive")));
                }
                if values.len() < 2 || values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter("sampled signal needs at least two finite values".into()));
                }
            }
        }
        Ok(Self { kind, waveform })
    }

    pub fn pressure_sine(amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(SignalKind::Pressure, Waveform::Sine { amplitude, omega })
    }

    pub fn velocity_sine(amplitude: f64, omega: f64) -> Result<Self> {
        Self::new(SignalKind::Velocity, Waveform::Sine { amplitude, omega })
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    /// Signal excursion `s(t)`: acoustic pressure (Pa) or velocity (m/s).
    pub fn excursion(&self, t: f64) -> Result<f64> {
        Ok(match &self.waveform {
            Waveform::Sine { amplitude, omega } => amplitude * (omega * t).sin(),
            Waveform::MultiHarmonic { omega0, harmonics } => harmonics
                .iter()
                .map(|h| h.amplitude * (h.k as f64 * omega0 * t + h.phase).sin())
                .sum(),
            Waveform::Sampled { dtau, values } => {
                let (i, frac) = self.locate(t, *dtau, values.len())?;
                if frac == 0.0 {
                    values[i]
                } else {
                    values[i] + frac * (values[i + 1] - values[i])
                }
            }
        })
    }

    /// `ds/dt`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        Ok(match &self.waveform {
            Waveform::Sine { amplitude, omega } => amplitude * omega * (omega * t).cos(),
            Waveform::MultiHarmonic { omega0, harmonics } => harmonics
                .iter()
                .map(|h| {
                    let w = h.k as f64 * omega0;
                    h.amplitude * w * (w * t + h.phase).cos()
                })
                .sum(),
            Waveform::Sampled { dtau, values } => {
                let (i, _) = self.locate(t, *dtau, values.len())?;
                let i = i.min(values.len() - 2);
                (values[i + 1] - values[i]) / dtau
            }
        })
    }

    /// Largest `|ds/dt|` over all time (over the table for sampled signals).
    pub fn max_slope(&self) -> f64 {
        match &self.waveform {
            Waveform::Sine { amplitude, omega } => amplitude.abs() * omega,
            Waveform::MultiHarmonic { omega0, harmonics } => {
                harmonics.iter().map(|h| h.amplitude.abs() * h.k as f64 * omega0).sum()
            }
            Waveform::Sampled { dtau, values } => {
                values.windows(2).map(|w| (w[1] - w[0]).abs() / dtau).fold(0.0, f64::max)
            }
        }
    }

    /// Upper bound of `|s(t)|`.
    pub fn peak(&self) -> f64 {
        match &self.waveform {
            Waveform::Sine { amplitude, .. } => amplitude.abs(),
            Waveform::MultiHarmonic { harmonics, .. } => harmonics.iter().map(|h| h.amplitude.abs()).sum(),
            Waveform::Sampled { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Fundamental pulsation (rad/s) of periodic signals.
    pub fn fundamental(&self) -> Option<f64> {
        match &self.waveform {
            Waveform::Sine { omega, .. } => Some(*omega),
            Waveform::MultiHarmonic { omega0, harmonics } => {
                let k = harmonics.iter().map(|h| h.k).fold(0, gcd);
                Some(omega0 * k as f64)
            }
            Waveform::Sampled { .. } => None,
        }
    }

    /// Last instant covered by the signal, `None` when unbounded.
    pub fn end_time(&self) -> Option<f64> {
        match &self.waveform {
            Waveform::Sampled { dtau, values } => Some(dtau * (values.len() - 1) as f64),
            _ => None,
        }
    }

    fn locate(&self, t: f64, dtau: f64, len: usize) -> Result<(usize, f64)> {
        let end = dtau * (len - 1) as f64;
        let pos = t / dtau;
        // tolerate rounding of a time step that lands on the last sample
        if !(t >= 0.0) || pos > (len - 1) as f64 * (1.0 + 1e-12) {
            return Err(Error::SignalRange { t, end });
        }
        let pos = pos.min((len - 1) as f64);
        let i = (pos.floor() as usize).min(len - 2);
        Ok((i, pos - i as f64))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Linearized external state seen by the inlet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExternalState {
    pub u_e: f64,
    pub c_e: f64,
}

/// External state for an imposed total pressure `pi_val`.
pub fn external_from_pressure(pi_val: f64, gas: &GasModel) -> Result<ExternalState> {
    if !(pi_val > 0.0) || !pi_val.is_finite() {
        return Err(Error::InvalidParameter(format!("inlet pressure {pi_val} Pa must be positive")));
    }
    Ok(external_from_velocity((pi_val - gas.p0()) / (gas.rho0() * gas.c0()), gas))
}

/// External state for an imposed velocity `u_val`.
pub fn external_from_velocity(u_val: f64, gas: &GasModel) -> ExternalState {
    ExternalState { u_e: u_val, c_e: gas.c0() + 0.5 * (gas.gamma() - 1.0) * u_val }
}

/// Linear interpolation from the boundary state toward its interior
/// neighbour, weight `|celerity| Δt / Δx` clamped to `[0, 1]`.
pub fn foot_point(boundary: &ConservedState, neighbor: &ConservedState, celerity: f64, dt: f64, dx: f64) -> ConservedState {
    let lambda = (celerity.abs() * dt / dx).clamp(0.0, 1.0);
    let b = boundary.to_array();
    let n = neighbor.to_array();
    ConservedState::from_array([0, 1, 2].map(|c| b[c] + lambda * (n[c] - b[c])))
}

/// Rest values seen through the conserved round trip, so that deviations of
/// a stored rest state vanish exactly.
struct Reference {
    gamma: f64,
    factor: f64,
    rho0: f64,
    p0: f64,
    c: f64,
}

impl Reference {
    fn new(gas: &GasModel) -> Self {
        let rest = conserved_from_primitive(gas.rest_state(), gas);
        let prim = primitive_from_conserved(rest, gas).unwrap_or(gas.rest_state());
        Self {
            gamma: gas.gamma(),
            factor: 2.0 / (gas.gamma() - 1.0),
            rho0: gas.rho0(),
            p0: gas.p0(),
            c: sound_speed(prim, gas),
        }
    }

    /// `r+ − R0` of a state.
    fn plus_deviation(&self, prim: &PrimitiveState, gas: &GasModel) -> f64 {
        prim.u + self.factor * (sound_speed(*prim, gas) - self.c)
    }

    /// `r− + R0` of a state.
    fn minus_deviation(&self, prim: &PrimitiveState, gas: &GasModel) -> f64 {
        prim.u - self.factor * (sound_speed(*prim, gas) - self.c)
    }

    /// Isentropic (`S0`) state with the given invariant deviations.
    fn rebuild(&self, d_plus: f64, d_minus: f64, gas: &GasModel) -> Result<ConservedState> {
        let u = 0.5 * (d_plus + d_minus);
        let c = self.c + 0.25 * (self.gamma - 1.0) * (d_plus - d_minus);
        if !(c > 0.0) {
            return Err(Error::InvalidCharacteristics {
                r_plus: d_plus + self.factor * self.c,
                r_minus: d_minus - self.factor * self.c,
            });
        }
        let rho = self.rho0 * (c / self.c).powf(self.factor);
        let p = self.p0 * (rho / self.rho0).powf(self.gamma);
        Ok(conserved_from_primitive(PrimitiveState { rho, u, p }, gas))
    }
}

fn subsonic(w: &ConservedState, node: usize, gas: &GasModel) -> Result<PrimitiveState> {
    let prim = primitive_from_conserved(*w, gas).map_err(|e| e.at_node(node))?;
    let mach = prim.u.abs() / sound_speed(prim, gas);
    if mach >= 1.0 {
        return Err(Error::UnsupportedRegime { node, mach });
    }
    Ok(prim)
}

/// Deviation `r− + R0` carried to the inlet along `u − c`.
fn incoming_minus(w0: &ConservedState, w1: &ConservedState, gas: &GasModel, dt: f64, dx: f64, r: &Reference) -> Result<f64> {
    let p0 = subsonic(w0, 0, gas)?;
    subsonic(w1, 1, gas)?;
    let foot = foot_point(w0, w1, p0.u - sound_speed(p0, gas), dt, dx);
    let pf = primitive_from_conserved(foot, gas).map_err(|e| e.at_node(0))?;
    Ok(r.minus_deviation(&pf, gas))
}

fn inflow_from_external(ext: ExternalState, w0: &ConservedState, w1: &ConservedState, gas: &GasModel, dt: f64, dx: f64) -> Result<ConservedState> {
    let r = Reference::new(gas);
    let d_minus = incoming_minus(w0, w1, gas, dt, dx, &r)?;
    // r+ = u_e + 2 c_e/(γ−1), relative to its rest value
    let d_plus = ext.u_e + r.factor * (ext.c_e - gas.c0());
    r.rebuild(d_plus, d_minus, gas)
}

/// New inlet state for an imposed total pressure `pi_val` (Pa).
pub fn inflow_update_pressure(pi_val: f64, w0: &ConservedState, w1: &ConservedState, gas: &GasModel, dt: f64, dx: f64) -> Result<ConservedState> {
    inflow_from_external(external_from_pressure(pi_val, gas)?, w0, w1, gas, dt, dx)
}

/// New inlet state for an imposed velocity `u_val` (m/s).
pub fn inflow_update_velocity(u_val: f64, w0: &ConservedState, w1: &ConservedState, gas: &GasModel, dt: f64, dx: f64) -> Result<ConservedState> {
    inflow_from_external(external_from_velocity(u_val, gas), w0, w1, gas, dt, dx)
}

/// New outlet state: no incoming wave (`r− = −2c0/(γ−1)`), `r+` from the
/// foot of the `u + c` characteristic, entropy `S0`.
pub fn outflow_update(w_inner: &ConservedState, w_last: &ConservedState, last: usize, gas: &GasModel, dt: f64, dx: f64) -> Result<ConservedState> {
    let r = Reference::new(gas);
    let pl = subsonic(w_last, last, gas)?;
    subsonic(w_inner, last.saturating_sub(1), gas)?;
    let foot = foot_point(w_last, w_inner, pl.u + sound_speed(pl, gas), dt, dx);
    let pf = primitive_from_conserved(foot, gas).map_err(|e| e.at_node(last))?;
    r.rebuild(r.plus_deviation(&pf, gas), 0.0, gas)
}

/// Updates the inlet for the signal value at time `t`.
pub fn inflow_update(signal: &InflowSignal, t: f64, w0: &ConservedState, w1: &ConservedState, gas: &GasModel, dt: f64, dx: f64) -> Result<ConservedState> {
    let s = signal.excursion(t)?;
    match signal.kind() {
        SignalKind::Pressure => inflow_update_pressure(gas.p0() + s, w0, w1, gas, dt, dx),
        SignalKind::Velocity => inflow_update_velocity(s, w0, w1, gas, dt, dx),
    }
}
