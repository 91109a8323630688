//! Time loop coupling the interior scheme, the wall forcing and the
//! characteristic boundaries.
//!
//! Within a step every update reads level-`n` data only: sources first,
//! then the interior update, then both boundaries. The pressures of the new
//! level, boundary nodes included, are appended to the history.

use std::time::Instant;

use crate::analysis::{harmonic_spectrum, ProbeRecord, SpectrumResult};
use crate::boundary_layer::{source_field, source_time_derivative, KernelMode, KernelWeights, PressureHistory};
use crate::characteristic_bc::{inflow_update, outflow_update, InflowSignal, SignalKind};
use crate::error::{Error, Result};
use crate::gas::{conserved_from_primitive, primitive_unchecked, GasModel};
use crate::oracles::{sample_period, shock_distance};
use crate::scheme::{compute_dt, lax_wendroff_update, max_wave_speed, DuctGeometry, FieldState, Grid, StepControl, Vec3, ZERO3};

/// Run length, in seconds or in periods of the inflow fundamental.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunLength {
    Seconds(f64),
    Periods(u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub gas: GasModel,
    pub grid: Grid,
    pub geom: DuctGeometry,
    pub inflow: InflowSignal,
    pub losses: bool,
    pub length: RunLength,
    /// Probe abscissae (m), recorded at the nearest node.
    pub probes: Vec<f64>,
    /// Analysis sampling `τ = T0 / 2^N`.
    pub sampling_exponent: u32,
    /// Whole periods at the end of the run used for spectra.
    pub window_periods: u32,
    pub harmonics: usize,
    pub kernel_mode: KernelMode,
    pub max_lag: Option<usize>,
    pub cfl: f64,
    /// Forces `Δt = T0 / steps_per_period` instead of the CFL estimate.
    pub steps_per_period: Option<u32>,
}

impl Scenario {
    /// Lossless velocity sine with common defaults; fields can be adjusted
    /// afterwards.
    pub fn new(name: &str, gas: GasModel, grid: Grid, geom: DuctGeometry, inflow: InflowSignal) -> Self {
        Self {
            name: name.to_string(),
            gas,
            grid,
            geom,
            inflow,
            losses: false,
            length: RunLength::Periods(4),
            probes: Vec::new(),
            sampling_exponent: 8,
            window_periods: 1,
            harmonics: 10,
            kernel_mode: KernelMode::Consistent,
            max_lag: None,
            cfl: 0.8,
            steps_per_period: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        StepControl::new(self.cfl)?;
        let l = self.grid.length();
        if let Some(x) = self.probes.iter().find(|&&x| !(0.0..=l).contains(&x)) {
            return Err(Error::InvalidParameter(format!("probe at {x} m outside the duct [0, {l}] m")));
        }
        match self.length {
            RunLength::Seconds(s) if !(s > 0.0) || !s.is_finite() => {
                return Err(Error::InvalidParameter(format!("duration {s} s must be positive")));
            }
            RunLength::Periods(0) => return Err(Error::InvalidParameter("run needs at least one period".into())),
            RunLength::Periods(_) if self.inflow.fundamental().is_none() => {
                return Err(Error::InvalidParameter("a run length in periods needs a periodic inflow".into()));
            }
            _ => {}
        }
        if self.inflow.fundamental().is_some() {
            if self.window_periods == 0 {
                return Err(Error::InvalidParameter("analysis window needs at least one period".into()));
            }
            if !(4..=20).contains(&self.sampling_exponent) {
                return Err(Error::InvalidParameter(format!("sampling exponent {} outside 4..=20", self.sampling_exponent)));
            }
            if self.harmonics == 0 {
                return Err(Error::InvalidParameter("at least one harmonic must be analysed".into()));
            }
        }
        if self.steps_per_period == Some(0) {
            return Err(Error::InvalidParameter("steps per period must be positive".into()));
        }
        Ok(())
    }

    /// Shock-formation distance of a velocity sine inflow.
    pub fn shock_length(&self) -> Option<f64> {
        if self.inflow.kind() != SignalKind::Velocity {
            return None;
        }
        match self.inflow.waveform() {
            crate::characteristic_bc::Waveform::Sine { amplitude, omega } if *amplitude != 0.0 => {
                shock_distance(amplitude.abs(), *omega, &self.gas).ok()
            }
            _ => None,
        }
    }

    fn peak_velocity(&self) -> f64 {
        match self.inflow.kind() {
            SignalKind::Velocity => self.inflow.peak(),
            SignalKind::Pressure => self.inflow.peak() / (self.gas.rho0() * self.gas.c0()),
        }
    }

    /// Frozen time step.
    ///
    /// The CFL estimate on the rest state is reduced for the fastest simple
    /// wave the inflow can launch, then shortened to divide the signal
    /// period exactly.
    pub fn time_step(&self) -> Result<f64> {
        let period = self.inflow.fundamental().map(|w| 2.0 * std::f64::consts::PI / w);
        if let (Some(t0), Some(n)) = (period, self.steps_per_period) {
            return Ok(t0 / n as f64);
        }
        let (field, _) = initialize(self)?;
        let c0 = self.gas.c0();
        let speed_up = c0 / (c0 + 0.5 * (self.gas.gamma() + 1.0) * self.peak_velocity());
        let dt = compute_dt(&field, &self.grid, &self.gas, &StepControl::new(self.cfl)?)? * speed_up;
        Ok(match period {
            Some(t0) => t0 / (t0 / dt).ceil(),
            None => dt,
        })
    }

    pub fn period(&self) -> Option<f64> {
        self.inflow.fundamental().map(|w| 2.0 * std::f64::consts::PI / w)
    }

    pub fn probe_nodes(&self) -> Vec<usize> {
        self.probes.iter().map(|&x| self.grid.nearest_node(x)).collect()
    }
}

/// Rest field and a history seeded with its pressures.
pub fn initialize(scenario: &Scenario) -> Result<(FieldState, Vec<f64>)> {
    let gas = &scenario.gas;
    let rest = conserved_from_primitive(gas.rest_state(), gas);
    let field = FieldState::uniform(rest, &scenario.grid);
    let pressures = field.nodes.iter().map(|w| primitive_unchecked(w, gas.gamma()).p).collect();
    Ok((field, pressures))
}

/// A simulation in progress.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    field: FieldState,
    history: PressureHistory,
    weights: KernelWeights,
    sources: Vec<Vec3>,
    dt: f64,
    probes: Vec<ProbeRecord>,
    max_courant: f64,
}

impl Simulation {
    pub fn new(scenario: Scenario) -> Result<Self> {
        scenario.validate()?;
        let dt = scenario.time_step()?;
        Self::with_dt(scenario, dt)
    }

    /// Uses the given frozen time step instead of [`Scenario::time_step`].
    pub fn with_dt(scenario: Scenario, dt: f64) -> Result<Self> {
        scenario.validate()?;
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {dt} s must be positive")));
        }
        let (field, pressures) = initialize(&scenario)?;
        let mut history = PressureHistory::new(field.nodes.len(), dt, scenario.gas.p0())?.with_truncation(scenario.max_lag);
        history.push(&pressures)?;
        let mut probes: Vec<ProbeRecord> = scenario
            .probe_nodes()
            .into_iter()
            .map(|j| ProbeRecord::new(j, scenario.grid.x(j), 0.0, dt))
            .collect();
        for r in &mut probes {
            let p = primitive_unchecked(&field.nodes[r.node], scenario.gas.gamma());
            r.push(p.rho, p.u, p.p);
        }
        let nodes = field.nodes.len();
        Ok(Self {
            scenario,
            field,
            history,
            weights: KernelWeights::new(64),
            sources: vec![ZERO3; nodes],
            dt,
            probes,
            max_courant: 0.0,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn field(&self) -> &FieldState {
        &self.field
    }

    pub fn history(&self) -> &PressureHistory {
        &self.history
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn probes(&self) -> &[ProbeRecord] {
        &self.probes
    }

    pub fn max_courant(&self) -> f64 {
        self.max_courant
    }

    /// Wall forcing at the current level and its time derivative.
    fn current_sources(&mut self) -> Result<(Vec<Vec3>, Vec<Vec3>)> {
        let nodes = self.field.nodes.len();
        if !self.scenario.losses {
            return Ok((vec![ZERO3; nodes], vec![ZERO3; nodes]));
        }
        let n = self.field.step;
        self.weights.ensure(n + 1);
        let s = &self.scenario;
        let g = source_field(&self.history, &self.weights, &s.gas, &s.grid, &s.geom, s.kernel_mode)?;
        let dtg: Vec<Vec3> = g
            .iter()
            .zip(&self.sources)
            .map(|(cur, prev)| source_time_derivative(cur, prev, self.dt, n))
            .collect();
        Ok((g, dtg))
    }

    /// Advances one time step.
    pub fn step(&mut self) -> Result<()> {
        let s = &self.scenario;
        let gas = &s.gas;
        let dx = s.grid.dx();
        let courant = max_wave_speed(&self.field, gas) * self.dt / dx;
        self.max_courant = self.max_courant.max(courant);
        if courant > 1.0 {
            return Err(Error::CflViolation { step: self.field.step, courant });
        }
        let (g, dtg) = self.current_sources()?;
        let s = &self.scenario;
        let gas = &s.gas;
        let mut next = lax_wendroff_update(&self.field, &g, &dtg, gas, &s.grid, self.dt)?;
        let nodes = &self.field.nodes;
        let last = nodes.len() - 1;
        let t_next = (self.field.step + 1) as f64 * self.dt;
        next.nodes[0] = inflow_update(&s.inflow, t_next, &nodes[0], &nodes[1], gas, self.dt, dx)?;
        next.nodes[last] = outflow_update(&nodes[last - 1], &nodes[last], last, gas, self.dt, dx)?;
        next.t = t_next;

        let gamma = gas.gamma();
        let pressures: Vec<f64> = next.nodes.iter().map(|w| primitive_unchecked(w, gamma).p).collect();
        self.history.push(&pressures)?;
        for r in &mut self.probes {
            let p = primitive_unchecked(&next.nodes[r.node], gamma);
            r.push(p.rho, p.u, p.p);
        }
        self.sources = g;
        self.field = next;
        Ok(())
    }

    /// Number of steps making up the scenario's run length.
    pub fn total_steps(&self) -> usize {
        let seconds = match self.scenario.length {
            RunLength::Seconds(s) => s,
            RunLength::Periods(p) => p as f64 * self.scenario.period().unwrap_or(0.0),
        };
        (seconds / self.dt).round() as usize
    }
}

/// Windowed, resampled probe data and its spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeAnalysis {
    pub window: ProbeRecord,
    pub velocity: SpectrumResult,
    pub pressure: SpectrumResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub dt: f64,
    pub steps: usize,
    pub steps_per_period: Option<f64>,
    pub final_time: f64,
    pub max_courant: f64,
    pub losses: bool,
    pub kernel_mode: KernelMode,
    pub max_lag: Option<usize>,
    pub shock_length: Option<f64>,
    /// Seconds of wall-clock time; not part of the deterministic output.
    pub wall_clock: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub field: FieldState,
    /// Probe samples at every time step.
    pub records: Vec<ProbeRecord>,
    /// Present for periodic inflows.
    pub analysis: Vec<ProbeAnalysis>,
    pub report: RunReport,
}

/// Runs a scenario to its end.
pub fn run(scenario: &Scenario) -> Result<RunOutput> {
    let sim = Simulation::new(scenario.clone())?;
    run_simulation(sim)
}

/// Runs an already constructed simulation to the scenario's end.
pub fn run_simulation(mut sim: Simulation) -> Result<RunOutput> {
    let start = Instant::now();
    if let Some(end) = sim.scenario.inflow.end_time() {
        let needed = sim.total_steps() as f64 * sim.dt;
        if needed > end * (1.0 + 1e-12) {
            return Err(Error::SignalRange { t: needed, end });
        }
    }
    let steps = sim.total_steps();
    for _ in 0..steps {
        sim.step()?;
    }
    let analysis = analyse(&sim)?;
    let s = &sim.scenario;
    let report = RunReport {
        scenario: s.name.clone(),
        dt: sim.dt,
        steps,
        steps_per_period: s.period().map(|t0| t0 / sim.dt),
        final_time: sim.field.t,
        max_courant: sim.max_courant,
        losses: s.losses,
        kernel_mode: s.kernel_mode,
        max_lag: s.max_lag,
        shock_length: s.shock_length(),
        wall_clock: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { field: sim.field, records: sim.probes, analysis, report })
}

fn analyse(sim: &Simulation) -> Result<Vec<ProbeAnalysis>> {
    let s = &sim.scenario;
    let (Some(omega0), Some(period)) = (s.inflow.fundamental(), s.period()) else {
        return Ok(Vec::new());
    };
    let tau = sample_period(omega0, s.sampling_exponent)?;
    if tau < sim.dt * (1.0 - 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "analysis sampling T0/2^{} = {tau} s is finer than the time step {} s",
            s.sampling_exponent, sim.dt
        )));
    }
    let t_end = sim.field.t;
    let t_begin = t_end - s.window_periods as f64 * period;
    if t_begin < -1e-9 * period {
        return Err(Error::MisalignedWindow(format!(
            "a {}-period window does not fit in a {t_end} s run",
            s.window_periods
        )));
    }
    let count = s.window_periods as usize * (1usize << s.sampling_exponent);
    let k_max = s.harmonics.min((1usize << s.sampling_exponent) / 8).max(1);
    sim.probes
        .iter()
        .map(|r| {
            let window = r.resample_window(t_begin.max(0.0), tau, count)?;
            let velocity = harmonic_spectrum(&window.u, tau, omega0, k_max)?;
            let pressure = harmonic_spectrum(&window.p, tau, omega0, k_max)?;
            Ok(ProbeAnalysis { window, velocity, pressure })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{primitive_from_conserved, ConservedState, PrimitiveState};
    use crate::scheme::Symmetry;
    use std::f64::consts::PI;

    fn scenario(losses: bool, amplitude: f64) -> Scenario {
        let gas = GasModel::air();
        let mut s = Scenario::new(
            "test",
            gas,
            Grid::new(0.5, 40).unwrap(),
            DuctGeometry::new(5e-3, Symmetry::Axisymmetric).unwrap(),
            InflowSignal::velocity_sine(amplitude, 2.0 * PI * 500.0).unwrap(),
        );
        s.losses = losses;
        s.length = RunLength::Periods(2);
        s.probes = vec![0.0, 0.25, 0.5];
        s.sampling_exponent = 5;
        s.harmonics = 4;
        s
    }

    #[test]
    fn initial_state() {
        let s = scenario(true, 1.0);
        let (field, p) = initialize(&s).unwrap();
        let n = field.nodes.len();
        // trapezoidal total per unit cross-section
        let mass: f64 = (field.nodes.iter().map(|w| w.rho).sum::<f64>() - 0.5 * (field.nodes[0].rho + field.nodes[n - 1].rho)) * s.grid.dx();
        for w in &field.nodes {
            let pr = primitive_from_conserved(*w, &s.gas).unwrap();
            assert_eq!(pr.u, 0.0);
            assert!((pr.p / pr.rho.powf(1.4) - s.gas.s0()).abs() <= 1e-14 * s.gas.s0());
        }
        assert!((mass - s.gas.rho0() * s.grid.length()).abs() < 1e-14);
        assert!(p.iter().all(|&v| (v - s.gas.p0()).abs() <= 1e-9));
    }

    #[test]
    fn rest_is_stationary_with_and_without_losses() {
        for losses in [false, true] {
            let s = scenario(losses, 0.0);
            let mut sim = Simulation::new(s).unwrap();
            let start = sim.field().nodes.clone();
            for _ in 0..50 {
                sim.step().unwrap();
            }
            assert_eq!(sim.field().nodes, start);
        }
    }

    #[test]
    fn zero_amplitude_run_is_flat() {
        let out = run(&scenario(true, 0.0)).unwrap();
        for r in &out.records {
            assert!(r.u.iter().all(|&u| u == 0.0));
        }
        for a in &out.analysis {
            assert!(a.velocity.magnitudes.iter().all(|&m| m == 0.0));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run(&scenario(true, 2.0)).unwrap();
        let b = run(&scenario(true, 2.0)).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.analysis, b.analysis);
        assert_eq!(a.field, b.field);
    }

    #[test]
    fn dt_divides_the_period() {
        let s = scenario(false, 20.0);
        let dt = s.time_step().unwrap();
        let per = s.period().unwrap() / dt;
        assert!((per - per.round()).abs() < 1e-9);
        let (field, _) = initialize(&s).unwrap();
        assert!(dt <= 0.8 * s.grid.dx() / max_wave_speed(&field, &s.gas));
    }

    #[test]
    fn window_must_fit_and_sampling_must_be_coarse_enough() {
        let mut s = scenario(false, 1.0);
        s.window_periods = 3;
        assert!(matches!(run(&s), Err(Error::MisalignedWindow(_))));
        let mut s = scenario(false, 1.0);
        s.sampling_exponent = 12;
        assert!(run(&s).is_err());
        let mut s = scenario(false, 1.0);
        s.probes = vec![0.7];
        assert!(s.validate().is_err());
    }

    #[test]
    fn lossless_and_vanishing_transport_agree() {
        let off = run(&scenario(false, 5.0)).unwrap();
        let mut s = scenario(true, 5.0);
        s.gas = GasModel::new(1.4, 0.0, 0.0, 1005.0, 1.2, 101_325.0, 300.0).unwrap();
        let zero = run(&s).unwrap();
        assert_eq!(off.records, zero.records);
    }

    /// Straight-line reimplementation of one coupled step on five nodes.
    mod reference {
        use super::*;

        pub fn prim(w: [f64; 3], g: f64) -> (f64, f64, f64) {
            let u = w[1] / w[0];
            (w[0], u, (g - 1.0) * (w[2] - 0.5 * w[0] * u * u))
        }

        pub fn flux(w: [f64; 3], g: f64) -> [f64; 3] {
            let (rho, u, p) = prim(w, g);
            [rho * u, rho * u * u + p, u * (w[2] + p)]
        }

        pub fn jac(w: [f64; 3], g: f64) -> [[f64; 3]; 3] {
            let u = w[1] / w[0];
            let h = w[2] / w[0];
            [
                [0.0, 1.0, 0.0],
                [0.5 * (g - 3.0) * u * u, (3.0 - g) * u, g - 1.0],
                [(g - 1.0) * u * u * u - g * u * h, g * h - 1.5 * (g - 1.0) * u * u, g * u],
            ]
        }

        pub fn g_sources(hist: &[Vec<f64>], n: usize, dt: f64, dx: f64, gas: &GasModel, beta_h: f64) -> Vec<[f64; 3]> {
            let nodes = hist[0].len();
            let w = |m: usize| 1.0 / ((m as f64).sqrt() + ((m + 1) as f64).sqrt());
            let mut out = vec![[0.0; 3]; nodes];
            let pi = std::f64::consts::PI;
            for j in 0..nodes {
                let mut heat = 0.0;
                for m in 0..n {
                    heat += (hist[n - m][j] - hist[n - m - 1][j]) * w(m);
                }
                out[j][2] = -2.0 * beta_h * (gas.k_cond() / (gas.rho0() * gas.cp() * pi)).sqrt() * heat / dt.sqrt();
            }
            for j in 1..nodes - 1 {
                let mut shear = 0.0;
                for m in 0..n {
                    shear += ((hist[n - m - 1][j + 1] + hist[n - m][j + 1]) - (hist[n - m - 1][j - 1] + hist[n - m][j - 1])) * w(m);
                }
                out[j][1] = beta_h * (gas.mu() / (gas.rho0() * pi)).sqrt() * dt.sqrt() / (2.0 * dx) * shear;
            }
            out[0][1] = out[1][1];
            out[nodes - 1][1] = out[nodes - 2][1];
            out
        }
    }

    #[test]
    fn single_step_matches_straight_line_reference() {
        let gas = GasModel::air();
        let g = gas.gamma();
        let grid = Grid::new(0.04, 4).unwrap();
        let geom = DuctGeometry::new(2e-3, Symmetry::Axisymmetric).unwrap();
        let mut s = Scenario::new("five", gas, grid, geom, InflowSignal::pressure_sine(300.0, 2.0 * PI * 800.0).unwrap());
        s.losses = true;
        s.length = RunLength::Periods(1);
        let dt = 1.5e-5;
        let mut sim = Simulation::with_dt(s, dt).unwrap();
        for _ in 0..6 {
            sim.step().unwrap();
        }
        let n = sim.field().step;
        let levels: Vec<Vec<f64>> = (0..=n).map(|m| (0..5).map(|j| sim.history().pressure(j, m)).collect()).collect();
        let prev_levels = &levels[..n];
        let w: Vec<[f64; 3]> = sim.field().nodes.iter().map(|w| w.to_array()).collect();
        let dx = grid.dx();
        let beta_h = 2.0 / 2e-3;
        let gn = reference::g_sources(&levels, n, dt, dx, &gas, beta_h);
        let gp = reference::g_sources(prev_levels, n - 1, dt, dx, &gas, beta_h);
        let f: Vec<[f64; 3]> = w.iter().map(|&x| reference::flux(x, g)).collect();

        sim.step().unwrap();
        let got = &sim.field().nodes;

        for j in 1..4 {
            let mut out = [0.0; 3];
            let am = reference::jac(w[j - 1], g);
            let a0 = reference::jac(w[j], g);
            let ap = reference::jac(w[j + 1], g);
            for c in 0..3 {
                let d1 = gn[j][c] - (f[j + 1][c] - f[j - 1][c]) / (2.0 * dx);
                let mut hp = 0.0;
                let mut hm = 0.0;
                for k in 0..3 {
                    let dp = 0.5 * (gn[j][k] + gn[j + 1][k]) - (f[j + 1][k] - f[j][k]) / dx;
                    let dm = 0.5 * (gn[j - 1][k] + gn[j][k]) - (f[j][k] - f[j - 1][k]) / dx;
                    hp += 0.5 * (a0[c][k] + ap[c][k]) * dp;
                    hm += 0.5 * (am[c][k] + a0[c][k]) * dm;
                }
                let dtg = (gn[j][c] - gp[j][c]) / dt;
                let d2 = dtg - (hp - hm) / dx;
                out[c] = w[j][c] + dt * d1 + 0.5 * dt * dt * d2;
            }
            let ours = got[j].to_array();
            for c in 0..3 {
                assert!((ours[c] - out[c]).abs() <= 1e-13 * out[c].abs().max(1e-3), "node {j}, component {c}: {} vs {}", ours[c], out[c]);
            }
        }

        // inlet: u − 2c/(γ−1) from the foot point, p/ρ^γ = S0, linearized external invariant
        let fr = 2.0 / (g - 1.0);
        let (rho0, u0, p0) = reference::prim(w[0], g);
        let c_b = (g * p0 / rho0).sqrt();
        let lam = (u0 - c_b).abs() * dt / dx;
        let foot: Vec<f64> = (0..3).map(|c| w[0][c] + lam * (w[1][c] - w[0][c])).collect();
        let (rf, uf, pf) = reference::prim([foot[0], foot[1], foot[2]], g);
        let r_minus = uf - fr * (g * pf / rf).sqrt();
        let pi_val = gas.p0() + 300.0 * (2.0 * PI * 800.0 * (n + 1) as f64 * dt).sin();
        let ue = (pi_val - gas.p0()) / (gas.rho0() * gas.c0());
        let r_plus = ue + fr * (gas.c0() + 0.5 * (g - 1.0) * ue);
        let u = 0.5 * (r_plus + r_minus);
        let c = 0.25 * (g - 1.0) * (r_plus - r_minus);
        let rho = (c * c / (g * gas.s0())).powf(1.0 / (g - 1.0));
        let expect = conserved_from_primitive(PrimitiveState { rho, u, p: gas.s0() * rho.powf(g) }, &gas);
        let ours: ConservedState = got[0];
        for (a, b) in ours.to_array().iter().zip(expect.to_array()) {
            assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-3), "{a} vs {b}");
        }
    }
}
