//! Plain-text scenario configuration and the built-in presets.
//!
//! One `section.key = value` pair per line, `#` starts a comment. Numbers
//! are SI; frequencies are in Hz. Lists are comma separated; harmonics are
//! written `k:amplitude:phase`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::boundary_layer::KernelMode;
use crate::characteristic_bc::{Harmonic, InflowSignal, SignalKind, Waveform};
use crate::driver::{RunLength, Scenario};
use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::oracles::shock_distance;
use crate::scheme::{DuctGeometry, Grid, Symmetry};

#[derive(Debug, Clone, PartialEq)]
pub enum WaveformSpec {
    Sine { amplitude: f64, frequency: f64 },
    Harmonics { frequency: f64, harmonics: Vec<Harmonic> },
    Table { dt: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigDocument {
    pub name: String,
    pub gamma: f64,
    pub mu: f64,
    pub k_cond: f64,
    pub cp: f64,
    pub rho0: f64,
    pub p0: f64,
    pub theta0: f64,
    pub length: f64,
    pub cells: usize,
    pub h: f64,
    pub symmetry: Symmetry,
    pub kind: SignalKind,
    pub waveform: WaveformSpec,
    pub losses: bool,
    pub run_length: RunLength,
    pub cfl: f64,
    pub steps_per_period: Option<u32>,
    pub kernel_mode: KernelMode,
    pub truncate: Option<usize>,
    pub probes: Vec<f64>,
    pub sampling_exponent: u32,
    pub window_periods: u32,
    pub harmonics: usize,
}

const KEYS: &[&str] = &[
    "name",
    "gas.gamma",
    "gas.mu",
    "gas.k",
    "gas.cp",
    "gas.rho0",
    "gas.p0",
    "gas.theta0",
    "grid.length",
    "grid.cells",
    "geometry.h",
    "geometry.symmetry",
    "inflow.kind",
    "inflow.waveform",
    "inflow.amplitude",
    "inflow.frequency",
    "inflow.harmonics",
    "inflow.table_dt",
    "inflow.table",
    "run.losses",
    "run.periods",
    "run.duration",
    "run.cfl",
    "run.steps_per_period",
    "run.kernel_mode",
    "run.truncate",
    "probes.x",
    "output.sampling_exponent",
    "output.window_periods",
    "output.harmonics",
];

struct Entry {
    line: usize,
    value: String,
    used: bool,
}

struct Entries(Vec<(String, Entry)>);

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.0.iter_mut().find(|(k, _)| k == key).map(|(_, e)| {
            e.used = true;
            (e.line, e.value.clone())
        })
    }

    fn first_line(&self) -> usize {
        self.0.first().map_or(1, |(_, e)| e.line)
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Config { line, message: format!("`{key}`: cannot parse `{v}` as a number") }),
        }
    }

    fn num_or<T: std::str::FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.num(key)?.unwrap_or(default))
    }

    fn required<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let line = self.first_line();
        self.num(key)?.ok_or_else(|| Error::Config { line, message: format!("missing required key `{key}`") })
    }

    fn word(&mut self, key: &str) -> Option<(usize, String)> {
        self.take(key)
    }
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config { line, message: format!("`{key}`: cannot parse `{}` as a number", s.trim()) })
        })
        .collect()
}

fn parse_harmonics(line: usize, v: &str) -> Result<Vec<Harmonic>> {
    v.split(',')
        .map(|item| {
            let parts: Vec<&str> = item.trim().split(':').map(str::trim).collect();
            let bad = || Error::Config { line, message: format!("`inflow.harmonics`: expected k:amplitude:phase, got `{}`", item.trim()) };
            if parts.len() != 3 {
                return Err(bad());
            }
            Ok(Harmonic {
                k: parts[0].parse().map_err(|_| bad())?,
                amplitude: parts[1].parse().map_err(|_| bad())?,
                phase: parts[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

fn on_off(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(Error::Config { line, message: format!("`{key}` must be `on` or `off`, got `{v}`") }),
    }
}

pub fn parse_kernel_mode(v: &str) -> Option<KernelMode> {
    match v {
        "consistent" => Some(KernelMode::Consistent),
        "as-printed" => Some(KernelMode::AsPrinted),
        _ => None,
    }
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Entries(Vec::new());
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(Error::Config { line, message: format!("expected `key = value`, got `{content}`") });
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config { line, message: format!("unknown key `{key}`") });
            }
            if entries.0.iter().any(|(k, _)| k == key) {
                return Err(Error::Config { line, message: format!("duplicate key `{key}`") });
            }
            entries.0.push((key.to_string(), Entry { line, value: value.trim().to_string(), used: false }));
        }

        let air = GasModel::air();
        let name = entries.word("name").map_or_else(|| "custom".to_string(), |(_, v)| v);
        let gamma = entries.num_or("gas.gamma", air.gamma())?;
        let mu = entries.num_or("gas.mu", air.mu())?;
        let k_cond = entries.num_or("gas.k", air.k_cond())?;
        let cp = entries.num_or("gas.cp", air.cp())?;
        let rho0 = entries.num_or("gas.rho0", air.rho0())?;
        let p0 = entries.num_or("gas.p0", air.p0())?;
        let theta0 = entries.num_or("gas.theta0", air.theta0())?;
        let length = entries.required("grid.length")?;
        let cells = entries.required("grid.cells")?;
        let h = entries.required("geometry.h")?;
        let symmetry = match entries.word("geometry.symmetry") {
            None => Symmetry::Axisymmetric,
            Some((_, v)) if v == "axisymmetric" => Symmetry::Axisymmetric,
            Some((_, v)) if v == "plane" => Symmetry::Plane,
            Some((line, v)) => {
                return Err(Error::Config { line, message: format!("`geometry.symmetry` must be `plane` or `axisymmetric`, got `{v}`") })
            }
        };
        let first = entries.first_line();
        let kind = match entries.word("inflow.kind") {
            Some((_, v)) if v == "velocity" => SignalKind::Velocity,
            Some((_, v)) if v == "pressure" => SignalKind::Pressure,
            Some((line, v)) => {
                return Err(Error::Config { line, message: format!("`inflow.kind` must be `velocity` or `pressure`, got `{v}`") })
            }
            None => return Err(Error::Config { line: first, message: "missing required key `inflow.kind`".into() }),
        };
        let waveform = match entries.word("inflow.waveform") {
            Some((_, v)) if v == "sine" => WaveformSpec::Sine {
                amplitude: entries.required("inflow.amplitude")?,
                frequency: entries.required("inflow.frequency")?,
            },
            Some((line, v)) if v == "harmonics" => {
                let frequency = entries.required("inflow.frequency")?;
                let (hl, hv) = entries
                    .take("inflow.harmonics")
                    .ok_or(Error::Config { line, message: "missing required key `inflow.harmonics`".into() })?;
                WaveformSpec::Harmonics { frequency, harmonics: parse_harmonics(hl, &hv)? }
            }
            Some((line, v)) if v == "table" => {
                let dt = entries.required("inflow.table_dt")?;
                let (tl, tv) = entries
                    .take("inflow.table")
                    .ok_or(Error::Config { line, message: "missing required key `inflow.table`".into() })?;
                WaveformSpec::Table { dt, values: parse_list(tl, "inflow.table", &tv)? }
            }
            Some((line, v)) => {
                return Err(Error::Config { line, message: format!("`inflow.waveform` must be sine, harmonics or table, got `{v}`") })
            }
            None => return Err(Error::Config { line: first, message: "missing required key `inflow.waveform`".into() }),
        };
        let losses = match entries.word("run.losses") {
            Some((line, v)) => on_off(line, "run.losses", &v)?,
            None => false,
        };
        let periods: Option<u32> = entries.num("run.periods")?;
        let duration: Option<f64> = entries.num("run.duration")?;
        let run_length = match (periods, duration) {
            (Some(p), None) => RunLength::Periods(p),
            (None, Some(d)) => RunLength::Seconds(d),
            (None, None) => RunLength::Periods(4),
            (Some(_), Some(_)) => {
                let line = entries.0.iter().find(|(k, _)| k == "run.duration").map_or(first, |(_, e)| e.line);
                return Err(Error::Config { line, message: "give either `run.periods` or `run.duration`, not both".into() });
            }
        };
        let cfl = entries.num_or("run.cfl", 0.8)?;
        let steps_per_period = entries.num("run.steps_per_period")?;
        let kernel_mode = match entries.word("run.kernel_mode") {
            None => KernelMode::Consistent,
            Some((line, v)) => parse_kernel_mode(&v).ok_or(Error::Config {
                line,
                message: format!("`run.kernel_mode` must be `consistent` or `as-printed`, got `{v}`"),
            })?,
        };
        let truncate = entries.num("run.truncate")?;
        let probes = match entries.take("probes.x") {
            Some((line, v)) => parse_list(line, "probes.x", &v)?,
            None => Vec::new(),
        };
        let sampling_exponent = entries.num_or("output.sampling_exponent", 8)?;
        let window_periods = entries.num_or("output.window_periods", 1)?;
        let harmonics = entries.num_or("output.harmonics", 10)?;

        if let Some((key, e)) = entries.0.iter().find(|(_, e)| !e.used) {
            return Err(Error::Config { line: e.line, message: format!("key `{key}` does not apply to this inflow") });
        }

        Ok(Self {
            name,
            gamma,
            mu,
            k_cond,
            cp,
            rho0,
            p0,
            theta0,
            length,
            cells,
            h,
            symmetry,
            kind,
            waveform,
            losses,
            run_length,
            cfl,
            steps_per_period,
            kernel_mode,
            truncate,
            probes,
            sampling_exponent,
            window_periods,
            harmonics,
        })
    }

    /// Canonical text; [`ConfigDocument::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "gas.gamma = {}", self.gamma);
        let _ = writeln!(s, "gas.mu = {}", self.mu);
        let _ = writeln!(s, "gas.k = {}", self.k_cond);
        let _ = writeln!(s, "gas.cp = {}", self.cp);
        let _ = writeln!(s, "gas.rho0 = {}", self.rho0);
        let _ = writeln!(s, "gas.p0 = {}", self.p0);
        let _ = writeln!(s, "gas.theta0 = {}", self.theta0);
        let _ = writeln!(s, "grid.length = {}", self.length);
        let _ = writeln!(s, "grid.cells = {}", self.cells);
        let _ = writeln!(s, "geometry.h = {}", self.h);
        let _ = writeln!(s, "geometry.symmetry = {}", self.symmetry.name());
        let _ = writeln!(s, "inflow.kind = {}", self.kind.name());
        match &self.waveform {
            WaveformSpec::Sine { amplitude, frequency } => {
                let _ = writeln!(s, "inflow.waveform = sine");
                let _ = writeln!(s, "inflow.amplitude = {amplitude}");
                let _ = writeln!(s, "inflow.frequency = {frequency}");
            }
            WaveformSpec::Harmonics { frequency, harmonics } => {
                let _ = writeln!(s, "inflow.waveform = harmonics");
                let _ = writeln!(s, "inflow.frequency = {frequency}");
                let list: Vec<String> = harmonics.iter().map(|h| format!("{}:{}:{}", h.k, h.amplitude, h.phase)).collect();
                let _ = writeln!(s, "inflow.harmonics = {}", list.join(", "));
            }
            WaveformSpec::Table { dt, values } => {
                let _ = writeln!(s, "inflow.waveform = table");
                let _ = writeln!(s, "inflow.table_dt = {dt}");
                let _ = writeln!(s, "inflow.table = {}", join(values));
            }
        }
        let _ = writeln!(s, "run.losses = {}", if self.losses { "on" } else { "off" });
        match self.run_length {
            RunLength::Periods(p) => {
                let _ = writeln!(s, "run.periods = {p}");
            }
            RunLength::Seconds(d) => {
                let _ = writeln!(s, "run.duration = {d}");
            }
        }
        let _ = writeln!(s, "run.cfl = {}", self.cfl);
        if let Some(n) = self.steps_per_period {
            let _ = writeln!(s, "run.steps_per_period = {n}");
        }
        let _ = writeln!(s, "run.kernel_mode = {}", self.kernel_mode.name());
        if let Some(m) = self.truncate {
            let _ = writeln!(s, "run.truncate = {m}");
        }
        let _ = writeln!(s, "probes.x = {}", join(&self.probes));
        let _ = writeln!(s, "output.sampling_exponent = {}", self.sampling_exponent);
        let _ = writeln!(s, "output.window_periods = {}", self.window_periods);
        let _ = writeln!(s, "output.harmonics = {}", self.harmonics);
        s
    }

    pub fn gas(&self) -> Result<GasModel> {
        GasModel::new(self.gamma, self.mu, self.k_cond, self.cp, self.rho0, self.p0, self.theta0)
    }

    pub fn inflow(&self) -> Result<InflowSignal> {
        let waveform = match &self.waveform {
            WaveformSpec::Sine { amplitude, frequency } => Waveform::Sine { amplitude: *amplitude, omega: 2.0 * PI * frequency },
            WaveformSpec::Harmonics { frequency, harmonics } => {
                Waveform::MultiHarmonic { omega0: 2.0 * PI * frequency, harmonics: harmonics.clone() }
            }
            WaveformSpec::Table { dt, values } => Waveform::Sampled { dtau: *dt, values: values.clone() },
        };
        InflowSignal::new(self.kind, waveform)
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        let mut s = Scenario::new(
            &self.name,
            self.gas()?,
            Grid::new(self.length, self.cells)?,
            DuctGeometry::new(self.h, self.symmetry)?,
            self.inflow()?,
        );
        s.losses = self.losses;
        s.length = self.run_length;
        s.probes = self.probes.clone();
        s.sampling_exponent = self.sampling_exponent;
        s.window_periods = self.window_periods;
        s.harmonics = self.harmonics;
        s.kernel_mode = self.kernel_mode;
        s.max_lag = self.truncate;
        s.cfl = self.cfl;
        s.steps_per_period = self.steps_per_period;
        s.validate()?;
        Ok(s)
    }
}

pub const PRESET_NAMES: [&str; 4] = ["simple-wave", "kirchhoff", "coupled", "trombone"];

/// Trombone input: fundamental of the slide in first position (B♭2) and
/// four harmonics at a forte mouthpiece level.
pub const TROMBONE_FREQUENCY: f64 = 116.54;
pub const TROMBONE_HARMONICS: [(u32, f64); 4] = [(1, 4000.0), (2, 2000.0), (3, 1200.0), (4, 600.0)];

fn base(name: &str, length: f64, cells: usize, h: f64, kind: SignalKind, waveform: WaveformSpec) -> ConfigDocument {
    let air = GasModel::air();
    ConfigDocument {
        name: name.to_string(),
        gamma: air.gamma(),
        mu: air.mu(),
        k_cond: air.k_cond(),
        cp: air.cp(),
        rho0: air.rho0(),
        p0: air.p0(),
        theta0: air.theta0(),
        length,
        cells,
        h,
        symmetry: Symmetry::Axisymmetric,
        kind,
        waveform,
        losses: false,
        run_length: RunLength::Periods(4),
        cfl: 0.8,
        steps_per_period: None,
        kernel_mode: KernelMode::Consistent,
        truncate: None,
        probes: Vec::new(),
        sampling_exponent: 8,
        window_periods: 1,
        harmonics: 10,
    }
}

/// Lossless 20 m/s, 200 Hz sine with probes at `s = 0.05, 0.4, 0.8`.
fn simple_wave() -> ConfigDocument {
    let (u0, f) = (20.0, 200.0);
    let ls = shock_distance(u0, 2.0 * PI * f, &GasModel::air()).unwrap_or(1.0);
    let cells = 500;
    let dx = ls / 600.0;
    let mut d = base("simple-wave", cells as f64 * dx, cells, 7e-3, SignalKind::Velocity, WaveformSpec::Sine { amplitude: u0, frequency: f });
    d.probes = [30.0, 240.0, 480.0].iter().map(|j| j * dx).collect();
    d.run_length = RunLength::Periods(5);
    d.window_periods = 2;
    d.harmonics = 25;
    d
}

pub fn preset(name: &str) -> Option<ConfigDocument> {
    let air = GasModel::air();
    Some(match name {
        "simple-wave" => simple_wave(),
        "coupled" => {
            let mut d = simple_wave();
            d.name = "coupled".into();
            d.losses = true;
            d
        }
        "kirchhoff" => {
            let f = 1000.0;
            let wavelength = air.c0() / f;
            let ppw = 40;
            let mut d = base(
                "kirchhoff",
                3.0 * wavelength,
                3 * ppw,
                5e-3,
                SignalKind::Velocity,
                WaveformSpec::Sine { amplitude: 0.03, frequency: f },
            );
            d.losses = true;
            d.probes = vec![0.0, 2.0 * wavelength];
            d.run_length = RunLength::Periods(6);
            d.window_periods = 2;
            d.sampling_exponent = 5;
            d.harmonics = 4;
            d
        }
        "trombone" => {
            let harmonics = TROMBONE_HARMONICS.iter().map(|&(k, a)| Harmonic { k, amplitude: a, phase: 0.0 }).collect();
            let mut d = base(
                "trombone",
                1.5,
                300,
                7e-3,
                SignalKind::Pressure,
                WaveformSpec::Harmonics { frequency: TROMBONE_FREQUENCY, harmonics },
            );
            d.losses = true;
            d.probes = vec![0.0, 1.5];
            d.run_length = RunLength::Periods(3);
            d.window_periods = 2;
            d.sampling_exponent = 9;
            d.harmonics = 16;
            d
        }
        _ => return None,
    })
}

pub fn builtin_scenarios() -> Vec<ConfigDocument> {
    PRESET_NAMES.iter().filter_map(|n| preset(n)).collect()
}
