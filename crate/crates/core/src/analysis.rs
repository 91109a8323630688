//! Probe records, harmonic spectra, decibel levels and error norms.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reference pressure for sound pressure levels (Pa).
pub const SPL_REFERENCE: f64 = 2e-5;

/// Uniformly sampled `(ρ, u, p)` history at one station.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub node: usize,
    pub x: f64,
    /// Time of the first sample (s).
    pub t_start: f64,
    /// Sample period (s).
    pub tau: f64,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

impl ProbeRecord {
    pub fn new(node: usize, x: f64, t_start: f64, tau: f64) -> Self {
        Self { node, x, t_start, tau, rho: Vec::new(), u: Vec::new(), p: Vec::new() }
    }

    pub fn push(&mut self, rho: f64, u: f64, p: f64) {
        self.rho.push(rho);
        self.u.push(u);
        self.p.push(p);
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t_start + m as f64 * self.tau
    }

    /// Duration covered when every sample stands for one period `τ`.
    pub fn span(&self) -> f64 {
        self.len() as f64 * self.tau
    }

    pub fn field(&self, q: Quantity) -> &[f64] {
        match q {
            Quantity::Density => &self.rho,
            Quantity::Velocity => &self.u,
            Quantity::Pressure => &self.p,
        }
    }

    /// Linear interpolation onto `t_begin + m τ`, `m = 0..count`.
    pub fn resample_window(&self, t_begin: f64, tau: f64, count: usize) -> Result<ProbeRecord> {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!("sample period {tau} must be positive")));
        }
        if self.len() < 2 {
            return Err(Error::MisalignedWindow("record holds fewer than two samples".into()));
        }
        let last = self.time(self.len() - 1);
        let t_end = t_begin + (count.saturating_sub(1)) as f64 * tau;
        let slack = 1e-9 * self.tau;
        if t_begin < self.t_start - slack || t_end > last + slack {
            return Err(Error::MisalignedWindow(format!(
                "window [{t_begin}, {t_end}] s outside recorded [{}, {last}] s",
                self.t_start
            )));
        }
        let mut out = ProbeRecord::new(self.node, self.x, t_begin, tau);
        for m in 0..count {
            let pos = ((t_begin + m as f64 * tau - self.t_start) / self.tau).clamp(0.0, (self.len() - 1) as f64);
            let i = (pos.floor() as usize).min(self.len() - 2);
            let mut w = pos - i as f64;
            // land exactly on samples that coincide up to rounding
            if w < 1e-9 {
                w = 0.0;
            } else if w > 1.0 - 1e-9 {
                w = 1.0;
            }
            let lerp = |s: &[f64]| s[i] + w * (s[i + 1] - s[i]);
            out.push(lerp(&self.rho), lerp(&self.u), lerp(&self.p));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Velocity,
    Pressure,
}

/// Resamples a whole record at `tau_target >= τ`; the span must hold an
/// integer number of target periods.
pub fn resample_probe(record: &ProbeRecord, tau_target: f64) -> Result<ProbeRecord> {
    if !(tau_target >= record.tau * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "target period {tau_target} s finer than native {} s",
            record.tau
        )));
    }
    let ratio = record.span() / tau_target;
    let count = ratio.round();
    if (ratio - count).abs() > 1e-6 * ratio.max(1.0) || count < 1.0 {
        return Err(Error::MisalignedWindow(format!(
            "span {} s is {ratio} target periods, not an integer",
            record.span()
        )));
    }
    record.resample_window(record.t_start, tau_target, count as usize)
}

/// Harmonic magnitudes and phases of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub omega0: f64,
    /// Entry `k - 1` holds harmonic `k`.
    pub magnitudes: Vec<f64>,
    /// Phase of `s ≈ Σ a_k cos(k ω0 t + φ_k)`, relative to the window start.
    pub phases: Vec<f64>,
}

impl SpectrumResult {
    pub fn k_max(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn magnitude(&self, k: usize) -> f64 {
        self.magnitudes[k - 1]
    }

    /// Level of harmonic `k` relative to `reference`.
    pub fn level(&self, k: usize, reference: f64) -> f64 {
        level_db(self.magnitude(k), reference)
    }
}

/// Magnitudes `|(2/M) Σ s_m e^{−i k ω0 t_m}|` for `k = 1..=k_max` over a
/// window of whole periods sampled at `T0 / τ` points per period.
pub fn harmonic_spectrum(series: &[f64], tau: f64, omega0: f64, k_max: usize) -> Result<SpectrumResult> {
    if !(omega0 > 0.0) || !(tau > 0.0) || k_max == 0 {
        return Err(Error::InvalidParameter("spectrum needs ω0 > 0, τ > 0 and K_max ≥ 1".into()));
    }
    let per_period = 2.0 * PI / omega0 / tau;
    let s = per_period.round();
    if (per_period - s).abs() > 1e-6 * per_period || s < 1.0 {
        return Err(Error::MisalignedWindow(format!("{per_period} samples per period is not an integer")));
    }
    let s = s as usize;
    let m = series.len();
    if m == 0 || !m.is_multiple_of(s) {
        return Err(Error::MisalignedWindow(format!("{m} samples do not cover whole periods of {s} samples")));
    }
    if s < 8 * k_max {
        return Err(Error::InvalidParameter(format!(
            "{s} samples per period cannot resolve {k_max} harmonics without aliasing (need {})",
            8 * k_max
        )));
    }
    let table: Vec<(f64, f64)> = (0..s).map(|i| (2.0 * PI * i as f64 / s as f64).sin_cos()).collect();
    let mut magnitudes = Vec::with_capacity(k_max);
    let mut phases = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in series.iter().enumerate() {
            let (sn, cs) = table[(k * i) % s];
            re += v * cs;
            im -= v * sn;
        }
        let scale = 2.0 / m as f64;
        magnitudes.push(scale * re.hypot(im));
        phases.push(im.atan2(re));
    }
    Ok(SpectrumResult { omega0, magnitudes, phases })
}

/// `20 log10(magnitude / reference)`, `-inf` for a zero magnitude.
pub fn level_db(magnitude: f64, reference: f64) -> f64 {
    if magnitude == 0.0 {
        return f64::NEG_INFINITY;
    }
    20.0 * (magnitude / reference).log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    Max,
}

/// `‖a − b‖ / ‖b‖`.
pub fn relative_error(a: &[f64], b: &[f64], norm: Norm) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { a: a.len(), b: b.len() });
    }
    let (num, den) = match norm {
        Norm::L2 => (
            a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
            b.iter().map(|y| y * y).sum::<f64>().sqrt(),
        ),
        Norm::Max => (
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
            b.iter().map(|y| y.abs()).fold(0.0, f64::max),
        ),
    };
    if den == 0.0 {
        return Err(Error::UndefinedReference);
    }
    Ok(num / den)
}

/// Largest `|Δs / τ|` between consecutive samples.
pub fn max_slope(series: &[f64], tau: f64) -> f64 {
    series.windows(2).map(|w| (w[1] - w[0]).abs() / tau).fold(0.0, f64::max)
}
