//! CSV and report files written by a run, and reading series back.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{level_db, ProbeRecord, SPL_REFERENCE};
use crate::driver::{ProbeAnalysis, RunOutput, RunReport};
use crate::error::{Error, Result};

pub const PROBE_HEADER: &str = "t_s,rho_kgpm3,u_mps,p_Pa";
pub const SPECTRUM_HEADER: &str = "k,f_Hz,u_amplitude_mps,u_level_dB_re_1mps,p_amplitude_Pa,p_SPL_dB";

pub fn probe_csv(record: &ProbeRecord) -> String {
    let mut s = String::with_capacity(64 * record.len() + 32);
    s.push_str(PROBE_HEADER);
    s.push('\n');
    for m in 0..record.len() {
        let _ = writeln!(s, "{},{},{},{}", record.time(m), record.rho[m], record.u[m], record.p[m]);
    }
    s
}

/// Pressure levels are taken from the fluctuation `p − p_mean`; the DFT
/// ignores the mean so the magnitudes are already fluctuation amplitudes.
pub fn spectrum_csv(a: &ProbeAnalysis) -> String {
    let mut s = String::new();
    s.push_str(SPECTRUM_HEADER);
    s.push('\n');
    let f0 = a.velocity.omega0 / (2.0 * std::f64::consts::PI);
    for k in 1..=a.velocity.k_max() {
        let (u, p) = (a.velocity.magnitude(k), a.pressure.magnitude(k));
        let _ = writeln!(s, "{k},{},{u},{},{p},{}", k as f64 * f0, level_db(u, 1.0), level_db(p, SPL_REFERENCE));
    }
    s
}

pub fn report_text(r: &RunReport, output: &RunOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scenario = {}", r.scenario);
    let _ = writeln!(s, "dt_s = {}", r.dt);
    let _ = writeln!(s, "steps = {}", r.steps);
    if let Some(n) = r.steps_per_period {
        let _ = writeln!(s, "steps_per_period = {n}");
    }
    let _ = writeln!(s, "final_time_s = {}", r.final_time);
    let _ = writeln!(s, "max_courant = {}", r.max_courant);
    let _ = writeln!(s, "losses = {}", if r.losses { "on" } else { "off" });
    let _ = writeln!(s, "kernel_mode = {}", r.kernel_mode.name());
    match r.max_lag {
        Some(m) => {
            let _ = writeln!(s, "history_truncation = {m}");
        }
        None => {
            let _ = writeln!(s, "history_truncation = none");
        }
    }
    if let Some(ls) = r.shock_length {
        let _ = writeln!(s, "shock_length_m = {ls}");
    }
    for rec in &output.records {
        let _ = writeln!(s, "probe node={} x_m={} samples={}", rec.node, rec.x, rec.len());
    }
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `probe_<i>.csv` (every step), `window_<i>.csv` (the resampled
/// analysis window), `spectrum_<i>.csv` and `report.txt` into `dir`.
pub fn write_run(dir: &Path, output: &RunOutput) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for (i, rec) in output.records.iter().enumerate() {
        let path = dir.join(format!("probe_{i}.csv"));
        write(&path, &probe_csv(rec))?;
        files.push(path);
        if let Some(a) = output.analysis.get(i) {
            let path = dir.join(format!("window_{i}.csv"));
            write(&path, &probe_csv(&a.window))?;
            files.push(path);
            let path = dir.join(format!("spectrum_{i}.csv"));
            write(&path, &spectrum_csv(a))?;
            files.push(path);
        }
    }
    let path = dir.join("report.txt");
    write(&path, &report_text(&output.report, output))?;
    files.push(path);
    Ok(files)
}

/// Columns of a numeric CSV with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((_, head)) = lines.next() else {
            return Err(Error::Config { line: 1, message: "empty table".into() });
        };
        let header: Vec<String> = head.split(',').map(|h| h.trim().to_string()).collect();
        let mut columns = vec![Vec::new(); header.len()];
        for (i, line) in lines {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::Config { line: i + 1, message: format!("expected {} fields, got {}", header.len(), cells.len()) });
            }
            for (col, cell) in columns.iter_mut().zip(cells) {
                let v = cell
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config { line: i + 1, message: format!("cannot parse `{}` as a number", cell.trim()) })?;
                col.push(v);
            }
        }
        Ok(Self { header, columns })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}
