#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ductwave::analysis::{harmonic_spectrum, relative_error, Norm};
use ductwave::characteristic_bc::InflowSignal;
use ductwave::config::{self, ConfigDocument, PRESET_NAMES};
use ductwave::driver::run;
use ductwave::gas::GasModel;
use ductwave::oracles::{sample_period, shock_distance, KirchhoffMode, KirchhoffModel, SimpleWaveProblem};
use ductwave::output::{write_run, Table};
use ductwave::scheme::Symmetry;
use ductwave::{Error, Result};

#[derive(Parser)]
#[command(name = "ductwave", version, about = "Nonlinear acoustic propagation in ducts with wall losses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print or run a built-in scenario.
    Scenario {
        /// One of simple-wave, kirchhoff, coupled, trombone.
        name: String,
        /// Print the configuration instead of running it.
        #[arg(long)]
        emit_config: bool,
        #[arg(long, required_unless_present = "emit_config")]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Exact lossless simple-wave solution for a velocity sine.
    OracleCharacteristics {
        /// Velocity amplitude (m/s).
        #[arg(long, default_value_t = 20.0)]
        amplitude: f64,
        /// Frequency (Hz).
        #[arg(long, default_value_t = 200.0)]
        frequency: f64,
        /// Station as a fraction of the shock distance.
        #[arg(long, default_value_t = 0.8)]
        s: f64,
        /// Samples per period are 2^exponent.
        #[arg(long, default_value_t = 8)]
        exponent: u32,
        #[arg(long, default_value_t = 1)]
        periods: u32,
        /// First sampled period; defaults to the first whole period after
        /// the wave has arrived.
        #[arg(long)]
        start_period: Option<u32>,
        #[arg(long, default_value_t = 10)]
        harmonics: usize,
        /// Directory for the series and spectrum tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Attenuation and phase speed of the wide-tube model.
    OracleKirchhoff {
        /// Frequency (Hz).
        #[arg(long)]
        frequency: f64,
        /// Duct radius or half-height (m).
        #[arg(long)]
        h: f64,
        #[arg(long, value_enum, default_value_t = SymmetryArg::Axisymmetric)]
        symmetry: SymmetryArg,
        /// Propagation distance (m).
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative error and harmonic ratios between two series tables.
    Compare {
        /// Series under test.
        a: PathBuf,
        /// Reference series.
        b: PathBuf,
        #[arg(long, default_value = "u_mps")]
        column: String,
        /// Fundamental (Hz) for a harmonic comparison.
        #[arg(long)]
        frequency: Option<f64>,
        #[arg(long, default_value_t = 10)]
        harmonics: usize,
    },
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long, value_enum)]
    losses: Option<OnOff>,
    #[arg(long, value_enum)]
    kernel_mode: Option<KernelArg>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Keep only the most recent M history levels in the wall sums.
    #[arg(long)]
    truncate: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Consistent,
    AsPrinted,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    Plane,
    Axisymmetric,
}

impl Overrides {
    fn apply(&self, d: &mut ConfigDocument) {
        if let Some(l) = self.losses {
            d.losses = matches!(l, OnOff::On);
        }
        if let Some(k) = self.kernel_mode {
            d.kernel_mode = match k {
                KernelArg::Consistent => ductwave::boundary_layer::KernelMode::Consistent,
                KernelArg::AsPrinted => ductwave::boundary_layer::KernelMode::AsPrinted,
            };
        }
        if let Some(c) = self.cfl {
            d.cfl = c;
        }
        if self.truncate.is_some() {
            d.truncate = self.truncate;
        }
    }
}

fn run_document(doc: &ConfigDocument, out: &Path) -> Result<()> {
    let scenario = doc.to_scenario()?;
    let output = run(&scenario)?;
    let files = write_run(out, &output)?;
    let r = &output.report;
    println!(
        "{}: {} steps of {:.6e} s, max Courant {:.4}, {:.3} s wall clock",
        r.scenario, r.steps, r.dt, r.max_courant, r.wall_clock
    );
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn oracle_characteristics(
    amplitude: f64,
    frequency: f64,
    s: f64,
    exponent: u32,
    periods: u32,
    start_period: Option<u32>,
    harmonics: usize,
    out: Option<&Path>,
) -> Result<()> {
    let gas = GasModel::air();
    let omega = 2.0 * PI * frequency;
    let ls = shock_distance(amplitude, omega, &gas)?;
    let x = s * ls;
    let problem = SimpleWaveProblem::new(InflowSignal::velocity_sine(amplitude, omega)?, gas, x)?;
    let tau = sample_period(omega, exponent)?;
    let t0 = 2.0 * PI / omega;
    let t_start = match start_period {
        Some(k) => k as f64 * t0,
        None => ((x / gas.c0()) / t0).ceil() * t0 + t0,
    };
    let count = periods as usize * (1usize << exponent);
    let series = problem.series(t_start, tau, count)?;
    let spectrum = harmonic_spectrum(&series, tau, omega, harmonics)?;
    println!("shock_distance_m = {ls}");
    println!("station_m = {x}");
    println!("steepness = {}", problem.steepness());
    let mut table = String::from("k,f_Hz,u_amplitude_mps\n");
    for k in 1..=spectrum.k_max() {
        let _ = writeln!(table, "{k},{},{}", k as f64 * frequency, spectrum.magnitude(k));
    }
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            let mut csv = String::from("t_s,u_mps\n");
            for (m, u) in series.iter().enumerate() {
                let _ = writeln!(csv, "{},{u}", t_start + m as f64 * tau);
            }
            write_file(&dir.join("oracle_series.csv"), &csv)?;
            write_file(&dir.join("oracle_spectrum.csv"), &table)?;
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn oracle_kirchhoff(frequency: f64, h: f64, symmetry: SymmetryArg, length: f64, points: usize, out: Option<&Path>) -> Result<()> {
    if points < 2 || !(length > 0.0) {
        return Err(Error::InvalidParameter("need at least two points over a positive length".into()));
    }
    let sym = match symmetry {
        SymmetryArg::Plane => Symmetry::Plane,
        SymmetryArg::Axisymmetric => Symmetry::Axisymmetric,
    };
    let omega = 2.0 * PI * frequency;
    let mut table = String::from("mode,f_Hz,x_m,alpha_per_m,c_phase_mps,amplitude_ratio,phase_rad\n");
    for mode in [KirchhoffMode::Corrected, KirchhoffMode::Printed] {
        let model = KirchhoffModel::new(GasModel::air(), h, mode)?.with_symmetry(sym);
        let alpha = model.alpha(omega)?;
        for i in 0..points {
            let x = length * i as f64 / (points - 1) as f64;
            let (c, ratio, phase) = match model.propagate(omega, 1.0, x) {
                Ok((a, ph)) => (model.phase_speed(omega)?, a, ph),
                Err(Error::OutOfValidity { .. }) => (f64::NAN, (-alpha * x).exp(), f64::NAN),
                Err(e) => return Err(e),
            };
            let _ = writeln!(table, "{},{frequency},{x},{alpha},{c},{ratio},{phase}", mode.name());
        }
    }
    match out {
        Some(path) => write_file(path, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

fn compare(a: &Path, b: &Path, column: &str, frequency: Option<f64>, harmonics: usize) -> Result<()> {
    let (ta, tb) = (Table::read(a)?, Table::read(b)?);
    let missing = |p: &Path| Error::InvalidParameter(format!("{} has no column `{column}`", p.display()));
    let ca = ta.column(column).ok_or_else(|| missing(a))?;
    let cb = tb.column(column).ok_or_else(|| missing(b))?;
    if ca.len() != cb.len() {
        return Err(Error::LengthMismatch { a: ca.len(), b: cb.len() });
    }
    let time_a = ta.column("t_s");
    if let (Some(xa), Some(xb)) = (time_a, tb.column("t_s")) {
        let scale = xb.iter().fold(0.0f64, |m, t| m.max(t.abs())).max(f64::MIN_POSITIVE);
        if xa.iter().zip(xb).any(|(p, q)| (p - q).abs() > 1e-9 * scale) {
            return Err(Error::MisalignedWindow("time columns differ".into()));
        }
    }
    println!("l2_relative_error = {}", relative_error(ca, cb, Norm::L2)?);
    println!("max_relative_error = {}", relative_error(ca, cb, Norm::Max)?);
    if let Some(f) = frequency {
        let t = time_a.ok_or_else(|| Error::InvalidParameter("a harmonic comparison needs a t_s column".into()))?;
        if t.len() < 2 {
            return Err(Error::MisalignedWindow("fewer than two samples".into()));
        }
        let tau = t[1] - t[0];
        let omega = 2.0 * PI * f;
        let sa = harmonic_spectrum(ca, tau, omega, harmonics)?;
        let sb = harmonic_spectrum(cb, tau, omega, harmonics)?;
        println!("k,magnitude_a,magnitude_b,ratio");
        for k in 1..=harmonics {
            let (ma, mb) = (sa.magnitude(k), sb.magnitude(k));
            println!("{k},{ma},{mb},{}", ma / mb);
        }
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, overrides } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
            let mut doc = ConfigDocument::parse(&text)?;
            overrides.apply(&mut doc);
            run_document(&doc, &out)
        }
        Command::Scenario { name, emit_config, out, overrides } => {
            let mut doc = config::preset(&name).ok_or_else(|| {
                Error::InvalidParameter(format!("unknown scenario `{name}`; available: {}", PRESET_NAMES.join(", ")))
            })?;
            overrides.apply(&mut doc);
            if emit_config {
                print!("{}", doc.to_text());
                return Ok(());
            }
            let out = out.ok_or_else(|| Error::InvalidParameter("--out is required to run a scenario".into()))?;
            run_document(&doc, &out)
        }
        Command::OracleCharacteristics { amplitude, frequency, s, exponent, periods, start_period, harmonics, out } => {
            oracle_characteristics(amplitude, frequency, s, exponent, periods, start_period, harmonics, out.as_deref())
        }
        Command::OracleKirchhoff { frequency, h, symmetry, length, points, out } => {
            oracle_kirchhoff(frequency, h, symmetry, length, points, out.as_deref())
        }
        Command::Compare { a, b, column, frequency, harmonics } => compare(&a, &b, &column, frequency, harmonics),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
