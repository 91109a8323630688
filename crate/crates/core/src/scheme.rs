//! Interior Lax-Wendroff scheme for the quasi-1D Euler system with wall
//! source terms.
//!
//! The update is the second-order Taylor expansion in time
//! `W + Δt ∂tW + Δt²/2 ∂t²W`, where `∂tW = G − ∂x f` is differenced
//! centrally and `∂t²W = ∂tG − ∂x(A ∂tW)` uses the two-point mean Jacobian
//! and the one-sided derivative at half nodes. Boundary nodes are left to
//! [`crate::characteristic_bc`].

use crate::error::{Error, Result};
use crate::gas::{primitive_unchecked, ConservedState, GasModel};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub const ZERO3: Vec3 = [0.0; 3];

#[inline]
fn mat_vec(a: &Mat3, v: &Vec3) -> Vec3 {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

/// Uniform grid `x_j = j Δx`, `j = 0..=J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    cells: usize,
    dx: f64,
}

impl Grid {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if cells < 4 {
            return Err(Error::InvalidGrid(format!("cell count {cells} below the minimum of 4")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length {length} must be positive")));
        }
        Ok(Self { length, cells, dx: length / cells as f64 })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    /// Number of cells `J`; there are `J + 1` nodes.
    pub fn cells(&self) -> usize {
        self.cells
    }
    pub fn nodes(&self) -> usize {
        self.cells + 1
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx
    }
    /// Node closest to abscissa `x`, clamped to the grid.
    pub fn nearest_node(&self, x: f64) -> usize {
        ((x / self.dx).round().max(0.0) as usize).min(self.cells)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Plane,
    Axisymmetric,
}

impl Symmetry {
    pub fn name(&self) -> &'static str {
        match self {
            Symmetry::Plane => "plane",
            Symmetry::Axisymmetric => "axisymmetric",
        }
    }
}

/// Cross-section of the duct: half-width `h` of a plane channel, or radius
/// of a cylindrical pipe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuctGeometry {
    h: f64,
    symmetry: Symmetry,
}

impl DuctGeometry {
    pub fn new(h: f64, symmetry: Symmetry) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("duct size h = {h} must be positive")));
        }
        Ok(Self { h, symmetry })
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }
    /// Wall-perimeter multiplier: 1 for a plane channel, 2 for a pipe.
    pub fn beta(&self) -> f64 {
        match self.symmetry {
            Symmetry::Plane => 1.0,
            Symmetry::Axisymmetric => 2.0,
        }
    }
}

/// Nodal conserved states at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub nodes: Vec<ConservedState>,
    pub t: f64,
    pub step: usize,
}

impl FieldState {
    pub fn uniform(state: ConservedState, grid: &Grid) -> Self {
        Self { nodes: vec![state; grid.nodes()], t: 0.0, step: 0 }
    }

    /// Index of the first node violating positivity, if any.
    pub fn first_invalid(&self) -> Option<usize> {
        self.nodes.iter().position(|w| !w.is_admissible())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub cfl: f64,
    pub dt: f64,
}

impl StepControl {
    pub fn new(cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("CFL number {cfl} must lie in (0, 1]")));
        }
        Ok(Self { cfl, dt: 0.0 })
    }
}

/// `f(W) = (ρu, ρu² + p, u (E + p))`.
#[inline]
pub fn physical_flux(w: &ConservedState, gas: &GasModel) -> Vec3 {
    let prim = primitive_unchecked(w, gas.gamma());
    [w.mom, w.mom * prim.u + prim.p, prim.u * (w.etot + prim.p)]
}

/// Analytic Jacobian `∂f/∂W` of the γ-law flux.
#[inline]
pub fn flux_jacobian(w: &ConservedState, gas: &GasModel) -> Mat3 {
    let g = gas.gamma();
    let u = w.mom / w.rho;
    let e_spec = w.etot / w.rho;
    let u2 = u * u;
    [
        [0.0, 1.0, 0.0],
        [0.5 * (g - 3.0) * u2, (3.0 - g) * u, g - 1.0],
        [u * ((g - 1.0) * u2 - g * e_spec), g * e_spec - 1.5 * (g - 1.0) * u2, g * u],
    ]
}

/// Two-point mean of the Jacobians at neighbouring nodes.
pub fn midpoint_jacobian(wj: &ConservedState, wj1: &ConservedState, gas: &GasModel) -> Mat3 {
    mean_matrix(&flux_jacobian(wj, gas), &flux_jacobian(wj1, gas))
}

#[inline]
fn mean_matrix(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            m[r][c] = 0.5 * (a[r][c] + b[r][c]);
        }
    }
    m
}

fn check_interior(j: usize, nodes: usize) -> Result<()> {
    if j == 0 || j + 1 >= nodes {
        return Err(Error::IndexOutOfRange { index: j, lo: 1, hi: nodes.saturating_sub(2) });
    }
    Ok(())
}

/// `(∂tW)_j = G_j − (f_{j+1} − f_{j−1}) / (2Δx)` at an interior node.
pub fn first_time_derivative(
    nodes: &[ConservedState],
    j: usize,
    source: &Vec3,
    gas: &GasModel,
    grid: &Grid,
) -> Result<Vec3> {
    check_interior(j, nodes.len())?;
    let fp = physical_flux(&nodes[j + 1], gas);
    let fm = physical_flux(&nodes[j - 1], gas);
    Ok(centered_derivative(&fp, &fm, source, grid.dx()))
}

#[inline]
fn centered_derivative(fp: &Vec3, fm: &Vec3, source: &Vec3, dx: f64) -> Vec3 {
    let inv = 1.0 / (2.0 * dx);
    [
        source[0] - (fp[0] - fm[0]) * inv,
        source[1] - (fp[1] - fm[1]) * inv,
        source[2] - (fp[2] - fm[2]) * inv,
    ]
}

/// `(∂tW)_{j+1/2} = (G_j + G_{j+1})/2 − (f_{j+1} − f_j)/Δx`.
pub fn midpoint_time_derivative(
    nodes: &[ConservedState],
    j: usize,
    source_j: &Vec3,
    source_j1: &Vec3,
    gas: &GasModel,
    grid: &Grid,
) -> Result<Vec3> {
    if j + 1 >= nodes.len() {
        return Err(Error::IndexOutOfRange { index: j, lo: 0, hi: nodes.len().saturating_sub(2) });
    }
    let f0 = physical_flux(&nodes[j], gas);
    let f1 = physical_flux(&nodes[j + 1], gas);
    Ok(half_node_derivative(&f0, &f1, source_j, source_j1, grid.dx()))
}

#[inline]
fn half_node_derivative(f0: &Vec3, f1: &Vec3, s0: &Vec3, s1: &Vec3, dx: f64) -> Vec3 {
    let inv = 1.0 / dx;
    [
        0.5 * (s0[0] + s1[0]) - (f1[0] - f0[0]) * inv,
        0.5 * (s0[1] + s1[1]) - (f1[1] - f0[1]) * inv,
        0.5 * (s0[2] + s1[2]) - (f1[2] - f0[2]) * inv,
    ]
}

/// `(∂t²W)_j = (∂tG)_j − (A_{j+1/2} (∂tW)_{j+1/2} − A_{j−1/2} (∂tW)_{j−1/2}) / Δx`.
pub fn second_time_derivative(
    dtg: &Vec3,
    jac_minus: &Mat3,
    jac_plus: &Mat3,
    dt_minus: &Vec3,
    dt_plus: &Vec3,
    grid: &Grid,
) -> Vec3 {
    let hp = mat_vec(jac_plus, dt_plus);
    let hm = mat_vec(jac_minus, dt_minus);
    let inv = 1.0 / grid.dx();
    [
        dtg[0] - (hp[0] - hm[0]) * inv,
        dtg[1] - (hp[1] - hm[1]) * inv,
        dtg[2] - (hp[2] - hm[2]) * inv,
    ]
}

/// Advances the interior nodes `1..J` by one step. Boundary nodes are copied
/// unchanged; `sources[j]` and `dtg[j]` must be given for every node.
pub fn lax_wendroff_update(
    field: &FieldState,
    sources: &[Vec3],
    dtg: &[Vec3],
    gas: &GasModel,
    grid: &Grid,
    dt: f64,
) -> Result<FieldState> {
    let n = field.nodes.len();
    if n != grid.nodes() {
        return Err(Error::LengthMismatch { a: n, b: grid.nodes() });
    }
    if sources.len() != n {
        return Err(Error::LengthMismatch { a: sources.len(), b: n });
    }
    if dtg.len() != n {
        return Err(Error::LengthMismatch { a: dtg.len(), b: n });
    }
    let dx = grid.dx();
    let nodes = &field.nodes;
    let flux: Vec<Vec3> = nodes.iter().map(|w| physical_flux(w, gas)).collect();
    let jac: Vec<Mat3> = nodes.iter().map(|w| flux_jacobian(w, gas)).collect();

    // A_{j+1/2} (∂tW)_{j+1/2} for j = 0..J-1
    let half: Vec<Vec3> = (0..n - 1)
        .map(|j| {
            let a = mean_matrix(&jac[j], &jac[j + 1]);
            let d = half_node_derivative(&flux[j], &flux[j + 1], &sources[j], &sources[j + 1], dx);
            mat_vec(&a, &d)
        })
        .collect();

    let mut next = nodes.clone();
    let half_dt2 = 0.5 * dt * dt;
    for j in 1..n - 1 {
        let d1 = centered_derivative(&flux[j + 1], &flux[j - 1], &sources[j], dx);
        let w = nodes[j].to_array();
        let mut out = [0.0; 3];
        for c in 0..3 {
            let d2 = dtg[j][c] - (half[j][c] - half[j - 1][c]) / dx;
            out[c] = w[c] + dt * d1[c] + half_dt2 * d2;
        }
        let updated = ConservedState::from_array(out);
        if !updated.is_admissible() {
            return Err(Error::BlowUp { step: field.step, node: j });
        }
        next[j] = updated;
    }
    Ok(FieldState { nodes: next, t: field.t + dt, step: field.step + 1 })
}

/// Largest characteristic speed `max_j (|u_j| + c_j)` over the field.
pub fn max_wave_speed(field: &FieldState, gas: &GasModel) -> f64 {
    field
        .nodes
        .iter()
        .map(|w| {
            let p = primitive_unchecked(w, gas.gamma());
            p.u.abs() + (gas.gamma() * p.p / p.rho).sqrt()
        })
        .fold(0.0, f64::max)
}

/// `Δt = cfl Δx / max_j (|u_j| + c_j)`.
pub fn compute_dt(field: &FieldState, grid: &Grid, gas: &GasModel, ctrl: &StepControl) -> Result<f64> {
    if let Some(j) = field.first_invalid() {
        let w = field.nodes[j];
        return Err(Error::InvalidState { node: Some(j), rho: w.rho, internal: w.internal_energy() });
    }
    Ok(ctrl.cfl * grid.dx() / max_wave_speed(field, gas))
}
