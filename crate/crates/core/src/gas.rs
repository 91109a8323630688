//! Perfect-gas thermodynamics and the state representations shared by the
//! interior scheme, the boundary treatment and the oracles.
//!
//! All quantities are SI. Volumic (bulk) viscosity is taken as zero.

use crate::error::{Error, Result};

/// Fluid constants and the reference (rest) state of the duct.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
    mu: f64,
    k_cond: f64,
    cp: f64,
    rho0: f64,
    p0: f64,
    theta0: f64,
    c0: f64,
    s0: f64,
}

impl GasModel {
    /// Builds a gas model, checking the physical ranges.
    ///
    /// `mu` and `k_cond` may be zero (inviscid, non-conducting fluid); every
    /// other constant must be strictly positive and `gamma > 1`.
    pub fn new(gamma: f64, mu: f64, k_cond: f64, cp: f64, rho0: f64, p0: f64, theta0: f64) -> Result<Self> {
        let finite = [gamma, mu, k_cond, cp, rho0, p0, theta0].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGas("non-finite constant".into()));
        }
        if gamma <= 1.0 {
            return Err(Error::InvalidGas(format!("gamma = {gamma} must exceed 1")));
        }
        if mu < 0.0 || k_cond < 0.0 {
            return Err(Error::InvalidGas("transport coefficients must be non-negative".into()));
        }
        for (name, v) in [("cp", cp), ("rho0", rho0), ("p0", p0), ("theta0", theta0)] {
            if v <= 0.0 {
                return Err(Error::InvalidGas(format!("{name} = {v} must be positive")));
            }
        }
        let c0 = (gamma * p0 / rho0).sqrt();
        let s0 = p0 / rho0.powf(gamma);
        Ok(Self { gamma, mu, k_cond, cp, rho0, p0, theta0, c0, s0 })
    }

    /// Standard air at 300 K.
    pub fn air() -> Self {
        Self::new(1.4, 1.81e-5, 0.0257, 1005.0, 1.2, 101_325.0, 300.0).expect("air constants are valid")
    }

    /// Same fluid with the transport coefficients switched off.
    pub fn inviscid(&self) -> Self {
        Self::new(self.gamma, 0.0, 0.0, self.cp, self.rho0, self.p0, self.theta0).expect("derived from a valid model")
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn k_cond(&self) -> f64 {
        self.k_cond
    }
    pub fn cp(&self) -> f64 {
        self.cp
    }
    /// Specific heat at constant volume, `cp / gamma`.
    pub fn cv(&self) -> f64 {
        self.cp / self.gamma
    }
    pub fn rho0(&self) -> f64 {
        self.rho0
    }
    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn theta0(&self) -> f64 {
        self.theta0
    }
    /// Reference sound speed `sqrt(gamma p0 / rho0)`.
    pub fn c0(&self) -> f64 {
        self.c0
    }
    /// Reference entropy `p0 / rho0^gamma`.
    pub fn s0(&self) -> f64 {
        self.s0
    }
    /// `mu cp / k`; infinite for a non-conducting fluid.
    pub fn prandtl(&self) -> f64 {
        self.mu * self.cp / self.k_cond
    }
    /// Kinematic viscosity `mu / rho0`.
    pub fn nu(&self) -> f64 {
        self.mu / self.rho0
    }
    /// Thermal diffusivity `k / (rho0 cp)`.
    pub fn chi(&self) -> f64 {
        self.k_cond / (self.rho0 * self.cp)
    }
    /// Viscous length `mu / (rho0 c0)`.
    pub fn l_visc(&self) -> f64 {
        self.mu / (self.rho0 * self.c0)
    }
    /// Combined visco-thermal length with zero bulk viscosity.
    pub fn l_vh(&self) -> f64 {
        (4.0 / 3.0) * self.mu / (self.rho0 * self.c0) + (self.gamma - 1.0) * self.k_cond / (self.rho0 * self.c0 * self.cp)
    }
    /// `2 / (gamma - 1)`, the Riemann-invariant factor.
    pub(crate) fn riemann_factor(&self) -> f64 {
        2.0 / (self.gamma - 1.0)
    }

    /// Rest state `(rho0, 0, p0)`.
    pub fn rest_state(&self) -> PrimitiveState {
        PrimitiveState { rho: self.rho0, u: 0.0, p: self.p0 }
    }
}

impl Default for GasModel {
    fn default() -> Self {
        Self::air()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveState {
    /// kg/m³
    pub rho: f64,
    /// m/s
    pub u: f64,
    /// Pa
    pub p: f64,
}

/// Conserved variables `(rho, rho u, rho (e + u²/2))`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mom: f64,
    pub etot: f64,
}

impl ConservedState {
    pub fn new(rho: f64, mom: f64, etot: f64) -> Self {
        Self { rho, mom, etot }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.mom, self.etot]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self { rho: a[0], mom: a[1], etot: a[2] }
    }

    /// Internal energy density `etot - mom² / (2 rho)`.
    pub fn internal_energy(&self) -> f64 {
        self.etot - self.mom * self.mom / (2.0 * self.rho)
    }

    pub fn is_admissible(&self) -> bool {
        self.rho > 0.0 && self.internal_energy() > 0.0 && self.etot.is_finite() && self.mom.is_finite()
    }
}

/// Riemann invariants `u ± 2c/(γ−1)` and the entropy `p / rho^γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicTriple {
    pub r_plus: f64,
    pub r_minus: f64,
    pub entropy: f64,
}

pub fn primitive_from_conserved(w: ConservedState, gas: &GasModel) -> Result<PrimitiveState> {
    let internal = w.internal_energy();
    if !(w.rho > 0.0) || !(internal > 0.0) {
        return Err(Error::InvalidState { node: None, rho: w.rho, internal });
    }
    Ok(PrimitiveState { rho: w.rho, u: w.mom / w.rho, p: (gas.gamma - 1.0) * internal })
}

/// Conversion without admissibility checks, for inner loops that have
/// already validated their input.
#[inline]
pub(crate) fn primitive_unchecked(w: &ConservedState, gamma: f64) -> PrimitiveState {
    let u = w.mom / w.rho;
    PrimitiveState { rho: w.rho, u, p: (gamma - 1.0) * (w.etot - 0.5 * w.mom * u) }
}

pub fn conserved_from_primitive(prim: PrimitiveState, gas: &GasModel) -> ConservedState {
    let mom = prim.rho * prim.u;
    ConservedState {
        rho: prim.rho,
        mom,
        etot: prim.p / (gas.gamma - 1.0) + 0.5 * mom * prim.u,
    }
}

pub fn sound_speed(prim: PrimitiveState, gas: &GasModel) -> f64 {
    (gas.gamma * prim.p / prim.rho).sqrt()
}

pub fn characteristics_from_primitive(prim: PrimitiveState, gas: &GasModel) -> CharacteristicTriple {
    let c = sound_speed(prim, gas);
    let f = gas.riemann_factor();
    CharacteristicTriple {
        r_plus: prim.u + f * c,
        r_minus: prim.u - f * c,
        entropy: prim.p / prim.rho.powf(gas.gamma),
    }
}

pub fn primitive_from_characteristics(tri: CharacteristicTriple, gas: &GasModel) -> Result<PrimitiveState> {
    if !(tri.r_plus > tri.r_minus) || !(tri.entropy > 0.0) {
        return Err(Error::InvalidCharacteristics { r_plus: tri.r_plus, r_minus: tri.r_minus });
    }
    let g = gas.gamma;
    let u = 0.5 * (tri.r_plus + tri.r_minus);
    let c = 0.25 * (g - 1.0) * (tri.r_plus - tri.r_minus);
    let rho = (c * c / (g * tri.entropy)).powf(1.0 / (g - 1.0));
    let p = tri.entropy * rho.powf(g);
    Ok(PrimitiveState { rho, u, p })
}

/// Temperature `e / Cv` of the main flow.
pub fn temperature_from_state(prim: PrimitiveState, gas: &GasModel) -> f64 {
    let e = prim.p / ((gas.gamma - 1.0) * prim.rho);
    e / gas.cv()
}
