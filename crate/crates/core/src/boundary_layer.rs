//! Visco-thermal wall forcing of the main flow.
//!
//! The acoustic boundary layer obeys linear heat equations forced by the
//! main-flow pressure, so the wall shear stress and wall heat flux are time
//! convolutions of the pressure history with a `1/√z` kernel. On a uniform
//! time grid every kernel interval integrates exactly to
//! `√Δt / (√m + √(m+1))`, which gives the precomputed [`KernelWeights`].
//!
//! Momentum forcing (two-point rule on each interval, centred difference in x):
//!
//! ```text
//! G2_j = (β/h) √(μ/(ρ0 π)) √Δt/(2Δx) Σ_m w_m [(p_{j+1}^{n-m-1} + p_{j+1}^{n-m}) - (p_{j-1}^{n-m-1} + p_{j-1}^{n-m})]
//! ```
//!
//! Energy forcing (one-point rule, backward difference in t):
//!
//! ```text
//! G3_j = -2 (β/h) κ / √Δt Σ_m w_m (p_j^{n-m} - p_j^{n-m-1})
//! ```
//!
//! with `κ = √(k/(ρ0 Cp π))`, or `√(μ/(ρ0 Cp π))` in [`KernelMode::AsPrinted`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::scheme::{DuctGeometry, Grid, Vec3, ZERO3};

/// Constant of the heat-flux kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMode {
    /// `√(k/(ρ0 Cp π))`, the wall derivative of the temperature solution.
    #[default]
    Consistent,
    /// `√(μ/(ρ0 Cp π))`, the constant as it is usually quoted for this model.
    AsPrinted,
}

impl KernelMode {
    pub fn name(&self) -> &'static str {
        match self {
            KernelMode::Consistent => "consistent",
            KernelMode::AsPrinted => "as-printed",
        }
    }

    pub fn heat_constant(&self, gas: &GasModel) -> f64 {
        let diffusive = match self {
            KernelMode::Consistent => gas.k_cond(),
            KernelMode::AsPrinted => gas.mu(),
        };
        (diffusive / (gas.rho0() * gas.cp() * PI)).sqrt()
    }
}

/// `w_m = 1/(√m + √(m+1))`, grown on demand.
#[derive(Debug, Clone, Default)]
pub struct KernelWeights {
    w: Vec<f64>,
}

impl KernelWeights {
    pub fn new(n_max: usize) -> Self {
        let mut k = Self::default();
        k.ensure(n_max);
        k
    }

    /// Makes `w_0..=w_{n_max}` available.
    pub fn ensure(&mut self, n_max: usize) {
        let start = self.w.len();
        if n_max + 1 > start {
            self.w.extend((start..=n_max).map(|m| {
                let m = m as f64;
                1.0 / (m.sqrt() + (m + 1.0).sqrt())
            }));
        }
    }

    pub fn get(&self, m: usize) -> f64 {
        self.w[m]
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }
}

/// Append-only nodal pressure series `p_j^m`, `m = 0..=n`.
///
/// Values are held relative to a fixed offset so that the kernel sums work on
/// acoustic-size numbers; the offset cancels in every difference.
#[derive(Debug, Clone)]
pub struct PressureHistory {
    series: Vec<Vec<f64>>,
    offset: f64,
    dt: f64,
    max_lag: Option<usize>,
}

impl PressureHistory {
    /// Empty history for `nodes` nodes. `offset` is usually the reference
    /// pressure `p0`.
    pub fn new(nodes: usize, dt: f64, offset: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("history time step {dt} must be positive")));
        }
        Ok(Self { series: vec![Vec::new(); nodes], offset, dt, max_lag: None })
    }

    /// Truncates the convolution sums to lags `m <= max_lag`; `None` keeps
    /// the full history.
    pub fn with_truncation(mut self, max_lag: Option<usize>) -> Self {
        self.max_lag = max_lag;
        self
    }

    pub fn push(&mut self, pressures: &[f64]) -> Result<()> {
        if pressures.len() != self.series.len() {
            return Err(Error::LengthMismatch { a: pressures.len(), b: self.series.len() });
        }
        for (s, p) in self.series.iter_mut().zip(pressures) {
            s.push(p - self.offset);
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.series.len()
    }

    /// Number of recorded levels (`n + 1` after level `n` was pushed).
    pub fn levels(&self) -> usize {
        self.series.first().map_or(0, Vec::len)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn max_lag(&self) -> Option<usize> {
        self.max_lag
    }

    pub fn pressure(&self, j: usize, m: usize) -> f64 {
        self.series[j][m] + self.offset
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.levels() {
            return Err(Error::IndexOutOfRange { index: n, lo: 0, hi: self.levels().saturating_sub(1) });
        }
        Ok(())
    }

    /// Highest lag included in the sums at level `n`, or `None` if the sum is empty.
    fn last_lag(&self, n: usize) -> Option<usize> {
        if n == 0 {
            return None;
        }
        Some(match self.max_lag {
            Some(mx) => mx.min(n - 1),
            None => n - 1,
        })
    }

    /// `Σ_m w_m (p^{n-m} + p^{n-m-1})` and `Σ_m w_m (p^{n-m} - p^{n-m-1})` at node `j`.
    fn kernel_sums(&self, j: usize, n: usize, weights: &KernelWeights) -> (f64, f64) {
        let Some(last) = self.last_lag(n) else {
            return (0.0, 0.0);
        };
        let s = &self.series[j];
        let w = &weights.as_slice()[..=last];
        let mut pair = 0.0;
        let mut diff = 0.0;
        // s[n - m] and s[n - m - 1] for m = 0..=last
        let newer = s[n - last..=n].iter().rev();
        let older = s[n - last - 1..n].iter().rev();
        for ((wm, a), b) in w.iter().zip(newer).zip(older) {
            pair += wm * (a + b);
            diff += wm * (a - b);
        }
        (pair, diff)
    }
}

fn shear_coefficient(gas: &GasModel, grid: &Grid, geom: &DuctGeometry, dt: f64) -> f64 {
    geom.beta() / geom.h() * (gas.mu() / (gas.rho0() * PI)).sqrt() * dt.sqrt() / (2.0 * grid.dx())
}

fn heat_coefficient(gas: &GasModel, geom: &DuctGeometry, mode: KernelMode, dt: f64) -> f64 {
    -2.0 * geom.beta() / geom.h() * mode.heat_constant(gas) / dt.sqrt()
}

/// Two-point rule for `∫_a^b φ(z) dz/√z`.
pub fn quad_two_point(phi_a: f64, phi_b: f64, a: f64, b: f64) -> f64 {
    (phi_a + phi_b) * (b - a) / (a.sqrt() + b.sqrt())
}

/// One-point (midpoint) rule for `∫_a^b φ(z) dz/√z`.
pub fn quad_one_point(phi_mid: f64, a: f64, b: f64) -> f64 {
    2.0 * phi_mid * (b - a) / (a.sqrt() + b.sqrt())
}

/// Momentum forcing `G2` (N/m³) at interior node `j`, level `n`.
pub fn wall_shear_sum(
    hist: &PressureHistory,
    j: usize,
    n: usize,
    weights: &KernelWeights,
    gas: &GasModel,
    grid: &Grid,
    geom: &DuctGeometry,
) -> Result<f64> {
    let nodes = hist.nodes();
    if j == 0 || j + 1 >= nodes {
        return Err(Error::IndexOutOfRange { index: j, lo: 1, hi: nodes.saturating_sub(2) });
    }
    hist.check_level(n)?;
    check_weights(weights, hist, n)?;
    let (plus, _) = hist.kernel_sums(j + 1, n, weights);
    let (minus, _) = hist.kernel_sums(j - 1, n, weights);
    Ok(shear_coefficient(gas, grid, geom, hist.dt()) * (plus - minus))
}

/// Energy forcing `G3` (W/m³) at node `j`, level `n`.
pub fn wall_heat_sum(
    hist: &PressureHistory,
    j: usize,
    n: usize,
    weights: &KernelWeights,
    gas: &GasModel,
    geom: &DuctGeometry,
    mode: KernelMode,
) -> Result<f64> {
    if j >= hist.nodes() {
        return Err(Error::IndexOutOfRange { index: j, lo: 0, hi: hist.nodes().saturating_sub(1) });
    }
    hist.check_level(n)?;
    check_weights(weights, hist, n)?;
    let (_, diff) = hist.kernel_sums(j, n, weights);
    Ok(heat_coefficient(gas, geom, mode, hist.dt()) * diff)
}

fn check_weights(weights: &KernelWeights, hist: &PressureHistory, n: usize) -> Result<()> {
    match hist.last_lag(n) {
        Some(last) if last >= weights.len() => Err(Error::InvalidParameter(format!(
            "kernel weights hold {} entries, lag {last} requested",
            weights.len()
        ))),
        _ => Ok(()),
    }
}

/// Wall forcing `(0, G2, G3)` at one node, with its previous-level value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SourceVector {
    pub g: Vec3,
    pub prev: Vec3,
}

/// Assembles the source at interior node `j` for level `n` and for level
/// `n - 1` (zero when `n = 0`).
#[allow(clippy::too_many_arguments)]
pub fn source_vector(
    hist: &PressureHistory,
    j: usize,
    n: usize,
    weights: &KernelWeights,
    gas: &GasModel,
    grid: &Grid,
    geom: &DuctGeometry,
    mode: KernelMode,
) -> Result<SourceVector> {
    let at = |level: usize| -> Result<Vec3> {
        Ok([
            0.0,
            wall_shear_sum(hist, j, level, weights, gas, grid, geom)?,
            wall_heat_sum(hist, j, level, weights, gas, geom, mode)?,
        ])
    };
    let g = at(n)?;
    let prev = if n == 0 { ZERO3 } else { at(n - 1)? };
    Ok(SourceVector { g, prev })
}

/// First-order time derivative `(G^n − G^{n−1})/Δt`; zero at `n = 0`.
pub fn source_time_derivative(current: &Vec3, previous: &Vec3, dt: f64, n: usize) -> Vec3 {
    if n == 0 {
        return ZERO3;
    }
    [0.0, (current[1] - previous[1]) / dt, (current[2] - previous[2]) / dt]
}

/// Sources at every node of the grid for the latest recorded level.
///
/// Interior nodes use [`wall_shear_sum`] and [`wall_heat_sum`]. The shear
/// term needs both neighbours, so the end nodes take the value of their
/// interior neighbour; the heat term is local and evaluated everywhere.
pub fn source_field(
    hist: &PressureHistory,
    weights: &KernelWeights,
    gas: &GasModel,
    grid: &Grid,
    geom: &DuctGeometry,
    mode: KernelMode,
) -> Result<Vec<Vec3>> {
    let levels = hist.levels();
    if levels == 0 {
        return Err(Error::InvalidParameter("empty pressure history".into()));
    }
    let n = levels - 1;
    check_weights(weights, hist, n)?;
    let nodes = hist.nodes();
    let sums: Vec<(f64, f64)> = (0..nodes).map(|j| hist.kernel_sums(j, n, weights)).collect();
    let cs = shear_coefficient(gas, grid, geom, hist.dt());
    let ch = heat_coefficient(gas, geom, mode, hist.dt());
    let mut out = vec![ZERO3; nodes];
    for j in 1..nodes - 1 {
        out[j][1] = cs * (sums[j + 1].0 - sums[j - 1].0);
    }
    out[0][1] = out[1][1];
    out[nodes - 1][1] = out[nodes - 2][1];
    for (o, s) in out.iter_mut().zip(&sums) {
        o[2] = ch * s.1;
    }
    Ok(out)
}

/// Error function, absolute error below 1e-7 everywhere.
///
/// Maclaurin series for `|x| < 2.5`, continued fraction for the complement
/// beyond.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < 2.5 {
        erf_series(ax)
    } else if ax > 6.0 {
        1.0
    } else {
        1.0 - erfc_continued_fraction(ax)
    };
    v.copysign(x)
}

fn erf_series(x: f64) -> f64 {
    // erf(x) = 2/√π Σ (-1)^n x^(2n+1) / (n! (2n+1))
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if contrib.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / PI.sqrt() * sum
}

fn erfc_continued_fraction(x: f64) -> f64 {
    // erfc(x) = exp(-x²)/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + 2/(x + ...)))))
    // evaluated bottom-up with a fixed depth, ample for x >= 2.5
    let mut f = x;
    for k in (1..=60).rev() {
        f = x + (k as f64 / 2.0) / f;
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Erf factor of the boundary-layer solution for diffusivity `diff`, lag `lag`.
fn profile_kernel(eta: f64, diff: f64, lag: f64) -> f64 {
    if eta == 0.0 {
        return 0.0;
    }
    let denom = (4.0 * diff * lag).sqrt();
    if denom == 0.0 {
        1.0
    } else {
        erf(eta / denom)
    }
}

/// Convolution `∫_0^t s(z) erf(η / √(4 D (t − z))) dz` by the trapezoid
/// rule on the samples `s(m Δt)`, `t = (len − 1) Δt`.
fn erf_convolution(history: &[f64], dt: f64, eta: f64, diff: f64) -> f64 {
    let n = history.len();
    if n < 2 {
        return 0.0;
    }
    let t = (n - 1) as f64 * dt;
    let value = |m: usize| history[m] * profile_kernel(eta, diff, t - m as f64 * dt);
    let mut acc = 0.0;
    let mut left = value(0);
    for m in 1..n {
        let right = value(m);
        acc += 0.5 * (left + right) * dt;
        left = right;
    }
    acc
}

/// Boundary-layer velocity `ξ(t, η)` driven by the samples of `∂p/∂x`
/// taken every `dt` from `0` to `t`.
pub fn bl_velocity_profile(pressure_gradient_history: &[f64], dt: f64, eta: f64, gas: &GasModel) -> f64 {
    -erf_convolution(pressure_gradient_history, dt, eta, gas.nu()) / gas.rho0()
}

/// Boundary-layer temperature `θ(t, η)` driven by the samples of `∂p/∂t`.
pub fn bl_temperature_profile(pressure_rate_history: &[f64], dt: f64, eta: f64, gas: &GasModel) -> f64 {
    gas.theta0() + erf_convolution(pressure_rate_history, dt, eta, gas.chi()) / (gas.rho0() * gas.cp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::Symmetry;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn setup(cells: usize) -> (GasModel, Grid, DuctGeometry) {
        (
            GasModel::air(),
            Grid::new(1.0, cells).unwrap(),
            DuctGeometry::new(5e-3, Symmetry::Axisymmetric).unwrap(),
        )
    }

    fn history_from(levels: &[Vec<f64>], dt: f64, p0: f64) -> PressureHistory {
        let mut h = PressureHistory::new(levels[0].len(), dt, p0).unwrap();
        for l in levels {
            h.push(l).unwrap();
        }
        h
    }

    #[test]
    fn weights_properties() {
        let w = KernelWeights::new(1000);
        assert_eq!(w.get(0), 1.0);
        for m in 0..1000 {
            assert!(w.get(m + 1) < w.get(m));
            assert!(w.get(m) > 0.0 && w.get(m) <= 1.0);
            let alt = ((m + 1) as f64).sqrt() - (m as f64).sqrt();
            assert_relative_eq!(w.get(m), alt, max_relative = 1e-10);
        }
    }

    #[test]
    fn quadrature_examples() {
        assert_relative_eq!(quad_two_point(1.0, 1.0, 1.0, 4.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(quad_two_point(3.0, 3.0, 1.0, 4.0), 6.0, max_relative = 1e-15);
        let v = quad_two_point(1.0, 4.0, 1.0, 4.0);
        assert_relative_eq!(v, 5.0, max_relative = 1e-15);
        assert_relative_eq!((v - 14.0 / 3.0) / (14.0 / 3.0), 1.0 / 14.0, max_relative = 1e-12);

        assert_relative_eq!(quad_one_point(1.0, 0.0, 1.0), 2.0, max_relative = 1e-15);
        assert_eq!(quad_one_point(0.0, 0.0, 1.0), 0.0);
        assert_relative_eq!(quad_one_point(0.5, 0.0, 1.0), 1.0, max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn quadratures_exact_for_constants(a in 0.0f64..50.0, len in 1e-6f64..50.0, c in -10.0f64..10.0) {
            let b = a + len;
            let exact = 2.0 * c * (b.sqrt() - a.sqrt());
            let tol = 1e-12 * exact.abs().max(1e-300);
            prop_assert!((quad_two_point(c, c, a, b) - exact).abs() <= tol);
            prop_assert!((quad_one_point(c, a, b) - exact).abs() <= tol);
        }

        #[test]
        fn sources_are_linear_in_history(
            seed_a in prop::collection::vec(-50.0f64..50.0, 7 * 6),
            seed_b in prop::collection::vec(-50.0f64..50.0, 7 * 6),
            alpha in -3.0f64..3.0,
        ) {
            let (gas, grid, geom) = setup(6);
            let lv = |s: &[f64]| -> Vec<Vec<f64>> { s.chunks(7).map(|c| c.to_vec()).collect() };
            let la = lv(&seed_a);
            let lb = lv(&seed_b);
            let lc: Vec<Vec<f64>> = la.iter().zip(&lb).map(|(a, b)| a.iter().zip(b).map(|(x, y)| alpha * x + y).collect()).collect();
            let w = KernelWeights::new(10);
            let fa = source_field(&history_from(&la, 1e-4, 0.0), &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
            let fb = source_field(&history_from(&lb, 1e-4, 0.0), &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
            let fc = source_field(&history_from(&lc, 1e-4, 0.0), &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
            for j in 0..7 {
                for c in 1..3 {
                    let expect = alpha * fa[j][c] + fb[j][c];
                    let scale = fa[j][c].abs() * alpha.abs() + fb[j][c].abs() + 1e-9;
                    prop_assert!((fc[j][c] - expect).abs() <= 1e-11 * scale);
                }
            }
        }
    }

    #[test]
    fn constant_history_gives_zero_source() {
        let (gas, grid, geom) = setup(8);
        let levels: Vec<Vec<f64>> = (0..40).map(|_| vec![101_325.0; 9]).collect();
        let hist = history_from(&levels, 1e-5, 101_325.0);
        let w = KernelWeights::new(50);
        for n in 0..40 {
            for j in 1..8 {
                assert_eq!(wall_shear_sum(&hist, j, n, &w, &gas, &grid, &geom).unwrap(), 0.0);
                assert_eq!(wall_heat_sum(&hist, j, n, &w, &gas, &geom, KernelMode::Consistent).unwrap(), 0.0);
            }
        }
        let field = source_field(&hist, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        assert!(field.iter().all(|g| *g == ZERO3));
    }

    #[test]
    fn uniform_in_space_history_has_no_shear() {
        let (gas, grid, geom) = setup(8);
        let levels: Vec<Vec<f64>> = (0..20).map(|m| vec![101_325.0 + (m as f64 * 0.3).sin(); 9]).collect();
        let hist = history_from(&levels, 1e-5, 101_325.0);
        let w = KernelWeights::new(50);
        for n in [0, 1, 7, 19] {
            assert_eq!(wall_shear_sum(&hist, 4, n, &w, &gas, &grid, &geom).unwrap(), 0.0);
        }
    }

    #[test]
    fn empty_sum_at_level_zero() {
        let (gas, grid, geom) = setup(8);
        let hist = history_from(&[(0..9).map(|j| 1e5 + j as f64).collect()], 1e-5, 1e5);
        let w = KernelWeights::new(1);
        assert_eq!(wall_shear_sum(&hist, 3, 0, &w, &gas, &grid, &geom).unwrap(), 0.0);
        assert_eq!(wall_heat_sum(&hist, 3, 0, &w, &gas, &geom, KernelMode::Consistent).unwrap(), 0.0);
    }

    #[test]
    fn standing_ramp_single_term() {
        let (gas, grid, geom) = setup(10);
        let a = 120.0;
        let dt = 2e-5;
        let level: Vec<f64> = (0..=10).map(|j| 101_325.0 + a * grid.x(j)).collect();
        let hist = history_from(&[level.clone(), level], dt, 101_325.0);
        let w = KernelWeights::new(4);
        let g2 = wall_shear_sum(&hist, 5, 1, &w, &gas, &grid, &geom).unwrap();
        let expect = geom.beta() / geom.h() * (gas.mu() / (gas.rho0() * PI)).sqrt() * dt.sqrt() * 2.0 * a;
        assert_relative_eq!(g2, expect, max_relative = 1e-10);
    }

    /// Literal double loop over the G2 formula.
    fn brute_force_g2(hist: &PressureHistory, j: usize, n: usize, gas: &GasModel, grid: &Grid, geom: &DuctGeometry) -> f64 {
        let mut acc = 0.0;
        for m in 0..n {
            let mf = m as f64;
            let bracket = (hist.pressure(j + 1, n - m - 1) + hist.pressure(j + 1, n - m))
                - (hist.pressure(j - 1, n - m - 1) + hist.pressure(j - 1, n - m));
            acc += hist.dt().sqrt() / (2.0 * grid.dx()) * bracket * (gas.mu() / (gas.rho0() * PI)).sqrt() / (mf.sqrt() + (mf + 1.0).sqrt());
        }
        geom.beta() / geom.h() * acc
    }

    fn brute_force_g3(hist: &PressureHistory, j: usize, n: usize, gas: &GasModel, geom: &DuctGeometry) -> f64 {
        let kappa = (gas.k_cond() / (gas.rho0() * gas.cp() * PI)).sqrt();
        let mut acc = 0.0;
        for m in 0..n {
            let mf = m as f64;
            acc += (hist.pressure(j, n - m) - hist.pressure(j, n - m - 1)) / hist.dt().sqrt() * kappa / (mf.sqrt() + (mf + 1.0).sqrt());
        }
        -2.0 * geom.beta() / geom.h() * acc
    }

    fn wavy_history(nodes: usize, levels: usize, dt: f64, grid: &Grid) -> PressureHistory {
        let lv: Vec<Vec<f64>> = (0..levels)
            .map(|m| {
                (0..nodes)
                    .map(|j| 101_325.0 + 40.0 * (3.0 * grid.x(j) - 900.0 * m as f64 * dt).sin() + 3.0 * (j as f64 * 0.7 + m as f64).cos())
                    .collect()
            })
            .collect();
        history_from(&lv, dt, 101_325.0)
    }

    #[test]
    fn sums_match_brute_force() {
        let (gas, grid, geom) = setup(12);
        let hist = wavy_history(13, 60, 3e-5, &grid);
        let w = KernelWeights::new(100);
        let field = source_field(&hist, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        for n in [1, 2, 17, 59] {
            for j in 1..12 {
                let g2 = wall_shear_sum(&hist, j, n, &w, &gas, &grid, &geom).unwrap();
                let g3 = wall_heat_sum(&hist, j, n, &w, &gas, &geom, KernelMode::Consistent).unwrap();
                assert_relative_eq!(g2, brute_force_g2(&hist, j, n, &gas, &grid, &geom), max_relative = 1e-9);
                assert_relative_eq!(g3, brute_force_g3(&hist, j, n, &gas, &geom), max_relative = 1e-9);
                if n == 59 {
                    assert_eq!(field[j][1], g2);
                    assert_eq!(field[j][2], g3);
                }
            }
        }
        assert_eq!(field[0][1], field[1][1]);
        assert_eq!(field[12][1], field[11][1]);
        assert_eq!(field[0][2], wall_heat_sum(&hist, 0, 59, &w, &gas, &geom, KernelMode::Consistent).unwrap());
    }

    #[test]
    fn single_jump_heat_term() {
        let (gas, _, geom) = setup(8);
        let dp = 25.0;
        let dt = 1e-5;
        let hist = history_from(&[vec![101_325.0; 9], vec![101_325.0 + dp; 9]], dt, 101_325.0);
        let w = KernelWeights::new(2);
        let kappa = (gas.k_cond() / (gas.rho0() * gas.cp() * PI)).sqrt();
        let g3 = wall_heat_sum(&hist, 3, 1, &w, &gas, &geom, KernelMode::Consistent).unwrap();
        assert_relative_eq!(g3, -2.0 * geom.beta() / geom.h() * kappa * dp / dt.sqrt(), max_relative = 1e-12);

        let printed = wall_heat_sum(&hist, 3, 1, &w, &gas, &geom, KernelMode::AsPrinted).unwrap();
        assert_relative_eq!(printed / g3, (gas.mu() / gas.k_cond()).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn index_errors() {
        let (gas, grid, geom) = setup(8);
        let hist = history_from(&[vec![1e5; 9]], 1e-5, 1e5);
        let w = KernelWeights::new(2);
        assert!(matches!(wall_shear_sum(&hist, 0, 0, &w, &gas, &grid, &geom), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(wall_shear_sum(&hist, 8, 0, &w, &gas, &grid, &geom), Err(Error::IndexOutOfRange { .. })));
        assert!(wall_shear_sum(&hist, 4, 3, &w, &gas, &grid, &geom).is_err());
        assert!(PressureHistory::new(9, 0.0, 0.0).is_err());
    }

    #[test]
    fn truncation_behaviour() {
        let (gas, grid, geom) = setup(12);
        let n = 400;
        let hist = wavy_history(13, n + 1, 3e-5, &grid);
        let w = KernelWeights::new(n + 1);
        let full = source_field(&hist, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        let same = source_field(&hist.clone().with_truncation(Some(n - 1)), &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        assert_eq!(full, same);
        let deviation = |m: usize| {
            let t = source_field(&hist.clone().with_truncation(Some(m)), &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
            (0..13).map(|j| (t[j][2] - full[j][2]).abs()).sum::<f64>() / (0..13).map(|j| full[j][2].abs()).sum::<f64>()
        };
        let d: Vec<f64> = [3, 30, 300].iter().map(|&m| deviation(m)).collect();
        assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    }

    #[test]
    fn source_vector_assembly() {
        let (gas, grid, geom) = setup(12);
        let hist = wavy_history(13, 30, 3e-5, &grid);
        let w = KernelWeights::new(40);
        let sv = source_vector(&hist, 6, 29, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        assert_eq!(sv.g[0], 0.0);
        assert_eq!(sv.g[1], wall_shear_sum(&hist, 6, 29, &w, &gas, &grid, &geom).unwrap());
        assert_eq!(sv.g[2], wall_heat_sum(&hist, 6, 29, &w, &gas, &geom, KernelMode::Consistent).unwrap());
        assert_eq!(sv.prev[1], wall_shear_sum(&hist, 6, 28, &w, &gas, &grid, &geom).unwrap());

        let zero = history_from(&vec![vec![1e5; 13]; 5], 1e-5, 1e5);
        let sv = source_vector(&zero, 6, 4, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap();
        assert_eq!(sv.g, ZERO3);
        assert_eq!(source_vector(&zero, 6, 0, &w, &gas, &grid, &geom, KernelMode::Consistent).unwrap().prev, ZERO3);
    }

    #[test]
    fn source_time_derivative_examples() {
        let a = 3.5;
        assert_eq!(source_time_derivative(&[0.0, a, 1.0], &[0.0, a, 1.0], 1e-5, 4), ZERO3);
        let d = source_time_derivative(&[0.0, 2.0 * a, 0.0], &[0.0, a, 0.0], 1e-3, 4);
        assert_relative_eq!(d[1], a / 1e-3);
        assert_eq!(d[2], 0.0);
        assert_eq!(source_time_derivative(&[0.0, 2.0, 3.0], &ZERO3, 1e-3, 0), ZERO3);
    }

    /// Non-alternating series erf(x) = 2/√π e^{-x²} Σ 2^n x^{2n+1} / (1·3·…·(2n+1)).
    fn erf_oracle(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-20 * sum.abs() {
            n += 1.0;
            term *= 2.0 * x * x / (2.0 * n + 1.0);
            sum += term;
        }
        2.0 / PI.sqrt() * (-x * x).exp() * sum
    }

    #[test]
    fn erf_examples() {
        assert_eq!(erf(0.0), 0.0);
        assert_relative_eq!(erf(1.0), 0.8427008, epsilon = 1e-6);
        let mut prev = -1.0;
        for i in -800..=800 {
            let x = i as f64 * 0.01;
            let v = erf(x);
            assert_eq!(erf(-x), -v);
            assert!(v >= prev, "monotone at {x}");
            prev = v;
            assert!((v - erf_oracle(x)).abs() < 1e-7, "erf({x}) = {v}, oracle {}", erf_oracle(x));
        }
        assert_eq!(erf(40.0), 1.0);
    }

    #[test]
    fn profile_limits() {
        let gas = GasModel::air();
        let dt = 1e-5;
        let hist: Vec<f64> = (0..200).map(|m| (m as f64 * 0.05).sin() * 100.0).collect();
        assert_eq!(bl_velocity_profile(&hist, dt, 0.0, &gas), 0.0);
        assert_eq!(bl_temperature_profile(&hist, dt, 0.0, &gas), gas.theta0());
        assert_eq!(bl_velocity_profile(&vec![0.0; 200], dt, 1e-3, &gas), 0.0);
        assert_eq!(bl_temperature_profile(&vec![0.0; 200], dt, 1e-3, &gas), gas.theta0());

        // far from the wall the erf factor is 1
        let a = 250.0;
        let t = 199.0 * dt;
        let xi = bl_velocity_profile(&vec![a; 200], dt, 0.5, &gas);
        assert_relative_eq!(xi, -a * t / gas.rho0(), max_relative = 1e-10);
        let b = 4e5;
        let theta = bl_temperature_profile(&vec![b; 200], dt, 0.5, &gas);
        assert_relative_eq!(theta, gas.theta0() + b * t / (gas.rho0() * gas.cp()), max_relative = 1e-10);
    }
}
