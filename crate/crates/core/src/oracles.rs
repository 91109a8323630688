//! Closed-form references: the lossless simple wave solved along its
//! straight characteristics, and the linear wide-tube (Kirchhoff) model.

use std::f64::consts::PI;

use crate::characteristic_bc::{InflowSignal, SignalKind};
use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::scheme::Symmetry;

/// Distance `2c0² / ((γ+1) ω0 U0)` at which the characteristics of a
/// sinusoidal simple wave first cross.
pub fn shock_distance(u0: f64, omega0: f64, gas: &GasModel) -> Result<f64> {
    if !(u0 > 0.0) || !(omega0 > 0.0) {
        return Err(Error::InvalidParameter(format!("shock distance needs U0 > 0 and ω0 > 0, got {u0}, {omega0}")));
    }
    Ok(2.0 * gas.c0() * gas.c0() / ((gas.gamma() + 1.0) * omega0 * u0))
}

pub fn scaled_abscissa(x: f64, l_shock: f64) -> Result<f64> {
    if !(l_shock > 0.0) {
        return Err(Error::InvalidParameter(format!("shock distance {l_shock} must be positive")));
    }
    Ok(x / l_shock)
}

/// `τ = T0 / 2^N`.
pub fn sample_period(omega0: f64, n: u32) -> Result<f64> {
    if !(4..=40).contains(&n) {
        return Err(Error::InvalidParameter(format!("sampling exponent {n} outside 4..=40")));
    }
    if !(omega0 > 0.0) {
        return Err(Error::InvalidParameter(format!("pulsation {omega0} must be positive")));
    }
    Ok(2.0 * PI / omega0 / (1u64 << n) as f64)
}

/// Velocity at station `L` of the simple wave launched by `u(0, t) = u0(t)`
/// into a fluid at rest.
#[derive(Debug, Clone)]
pub struct SimpleWaveProblem {
    signal: InflowSignal,
    gas: GasModel,
    station: f64,
}

impl SimpleWaveProblem {
    /// Rejects stations at or past the earliest crossing of characteristics,
    /// `2c0² / ((γ+1) max|u0'|)`.
    pub fn new(signal: InflowSignal, gas: GasModel, station: f64) -> Result<Self> {
        if signal.kind() != SignalKind::Velocity {
            return Err(Error::InvalidParameter("the simple-wave oracle needs a velocity signal".into()));
        }
        if !(station >= 0.0) || !station.is_finite() {
            return Err(Error::InvalidParameter(format!("station {station} m must be non-negative")));
        }
        let prob = Self { signal, gas, station };
        if prob.steepness() >= 1.0 - 1e-12 {
            return Err(Error::ShockRegime { t: 0.0 });
        }
        Ok(prob)
    }

    /// Station over the earliest crossing distance; the scaled abscissa `s`
    /// for a sinusoid.
    pub fn steepness(&self) -> f64 {
        let slope = self.signal.max_slope();
        if slope == 0.0 {
            return 0.0;
        }
        self.station * (self.gas.gamma() + 1.0) * slope / (2.0 * self.gas.c0() * self.gas.c0())
    }

    pub fn station(&self) -> f64 {
        self.station
    }

    pub fn gas(&self) -> &GasModel {
        &self.gas
    }

    pub fn signal(&self) -> &InflowSignal {
        &self.signal
    }

    fn u0(&self, t0: f64) -> Result<f64> {
        if t0 <= 0.0 {
            return Ok(0.0);
        }
        self.signal.excursion(t0)
    }

    fn du0(&self, t0: f64) -> Result<f64> {
        if t0 <= 0.0 {
            return Ok(0.0);
        }
        self.signal.derivative(t0)
    }

    /// Emission time `t0` of the characteristic reaching the station at `t`,
    /// or `None` before the first arrival.
    pub fn emission_time(&self, t: f64) -> Result<Option<f64>> {
        let c0 = self.gas.c0();
        let l = self.station;
        if t < l / c0 {
            return Ok(None);
        }
        if l == 0.0 {
            return Ok(Some(t));
        }
        let k = 0.5 * (self.gas.gamma() + 1.0);
        let f = |t0: f64| -> Result<f64> { Ok(t - t0 - l / (c0 + k * self.u0(t0)?)) };
        let df = |t0: f64| -> Result<f64> {
            let a = c0 + k * self.u0(t0)?;
            Ok(-1.0 + l * k * self.du0(t0)? / (a * a))
        };
        // below a few ulps of t the residual cannot be resolved
        let tol = (1e-12 * l / c0).max(4.0 * f64::EPSILON * t);

        // F(0) >= 0 >= F(t) brackets the root when no characteristics cross
        let (mut lo, mut hi) = (0.0, t);
        if f(lo)? < 0.0 {
            return Err(Error::ShockRegime { t });
        }
        let mut x = (t - l / c0).clamp(lo, hi);
        for _ in 0..100 {
            let fx = f(x)?;
            if fx.abs() < tol {
                return Ok(Some(x));
            }
            if fx > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let d = df(x)?;
            let newton = x - fx / d;
            x = if d < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * t.abs().max(1.0) {
                return if f(x)?.abs() < tol { Ok(Some(x)) } else { Err(Error::ShockRegime { t }) };
            }
        }
        Err(Error::ShockRegime { t })
    }

    /// `u(L, t) = u0(t0)`, zero before the first arrival.
    pub fn velocity(&self, t: f64) -> Result<f64> {
        match self.emission_time(t)? {
            Some(t0) => self.u0(t0),
            None => Ok(0.0),
        }
    }

    /// Samples `u(L, t_start + m τ)` for `m = 0..count`.
    pub fn series(&self, t_start: f64, tau: f64, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|m| self.velocity(t_start + m as f64 * tau)).collect()
    }
}

/// Shorthand for [`SimpleWaveProblem::velocity`].
pub fn simple_wave_velocity(prob: &SimpleWaveProblem, t: f64) -> Result<f64> {
    prob.velocity(t)
}

/// How the wide-tube correction is scaled with frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KirchhoffMode {
    /// Factor `c0 / (2 h ω)`, as the formula is usually printed; not
    /// dimensionally consistent.
    Printed,
    /// Factor `(1/h) √(ω / (2 c0))`, the classical wide-tube damping.
    #[default]
    Corrected,
}

impl KirchhoffMode {
    pub fn name(&self) -> &'static str {
        match self {
            KirchhoffMode::Printed => "printed",
            KirchhoffMode::Corrected => "corrected",
        }
    }
}

/// Linear wide-tube dispersion and damping.
///
/// The classical result is for a tube of radius `h`; a plane channel of
/// half-width `h` has half the wetted perimeter per unit area, so its
/// correction is halved.
#[derive(Debug, Clone)]
pub struct KirchhoffModel {
    gas: GasModel,
    h: f64,
    mode: KirchhoffMode,
    symmetry: Symmetry,
}

impl KirchhoffModel {
    pub fn new(gas: GasModel, h: f64, mode: KirchhoffMode) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("duct size {h} m must be positive")));
        }
        Ok(Self { gas, h, mode, symmetry: Symmetry::Axisymmetric })
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn mode(&self) -> KirchhoffMode {
        self.mode
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    fn bracket(&self) -> f64 {
        let g = &self.gas;
        let rc = g.rho0() * g.c0();
        (g.mu() / rc).sqrt() + (g.gamma() - 1.0) * (g.k_cond() / (rc * g.cp())).sqrt()
    }

    fn geometry_factor(&self) -> f64 {
        match self.symmetry {
            Symmetry::Axisymmetric => 1.0,
            Symmetry::Plane => 0.5,
        }
    }

    fn check_omega(omega: f64) -> Result<()> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("pulsation {omega} must be positive")));
        }
        Ok(())
    }

    /// Damping coefficient `α(ω)`.
    pub fn alpha(&self, omega: f64) -> Result<f64> {
        Self::check_omega(omega)?;
        let c0 = self.gas.c0();
        let factor = match self.mode {
            KirchhoffMode::Printed => c0 / (2.0 * self.h * omega),
            KirchhoffMode::Corrected => (omega / (2.0 * c0)).sqrt() / self.h,
        };
        Ok(self.geometry_factor() * self.bracket() * factor)
    }

    /// Relative phase-speed defect `Δ`, with `c′ = c0 (1 − Δ)`.
    pub fn correction(&self, omega: f64) -> Result<f64> {
        let alpha = self.alpha(omega)?;
        Ok(match self.mode {
            KirchhoffMode::Printed => alpha,
            KirchhoffMode::Corrected => alpha * self.gas.c0() / omega,
        })
    }

    /// Phase speed `c′(ω)`; the expansion holds only for `Δ < 0.5`.
    pub fn phase_speed(&self, omega: f64) -> Result<f64> {
        let delta = self.correction(omega)?;
        if delta >= 0.5 {
            return Err(Error::OutOfValidity { correction: delta });
        }
        Ok(self.gas.c0() * (1.0 - delta))
    }

    /// `(A e^{−αx}, ωx/c′)`.
    pub fn propagate(&self, omega: f64, amplitude: f64, x: f64) -> Result<(f64, f64)> {
        if !(x >= 0.0) {
            return Err(Error::InvalidParameter(format!("distance {x} m must be non-negative")));
        }
        let alpha = self.alpha(omega)?;
        let c = self.phase_speed(omega)?;
        Ok((amplitude * (-alpha * x).exp(), omega * x / c))
    }
}

pub fn kirchhoff_alpha(model: &KirchhoffModel, omega: f64) -> Result<f64> {
    model.alpha(omega)
}

pub fn kirchhoff_phase_speed(model: &KirchhoffModel, omega: f64) -> Result<f64> {
    model.phase_speed(omega)
}

pub fn kirchhoff_propagate(model: &KirchhoffModel, omega: f64, amplitude: f64, x: f64) -> Result<(f64, f64)> {
    model.propagate(omega, amplitude, x)
}
