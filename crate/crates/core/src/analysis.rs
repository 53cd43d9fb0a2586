//! Post-processing shared by the variational and PDE engines.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Spectral, WidthConvention};
use crate::pde::{RunStatus, Trajectory};
use crate::variational::{
    beta_for_constant_width, free_critical, integrate_width, FreeParams, Regime, TrapParams,
    WidthModel, WidthSeries, WidthStatus,
};

/// Relative excursion below which a trace counts as constant.
pub const CONSTANT_EXCURSION: f64 = 0.02;
/// Fraction of the initial width that counts as collapsed.
pub const COLLAPSE_FRACTION: f64 = 0.25;
/// Final/initial width ratio that counts as spreading.
pub const SPREAD_FACTOR: f64 = 1.5;
/// Minimum span, in time units, of a trace that did not terminate.
pub const MIN_SPAN: f64 = 2.0;

pub const LOCUS_T_END: f64 = 20.0;
pub const LOCUS_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceSource {
    Variational,
    Pde,
}

#[derive(Debug, Clone)]
pub struct WidthTrace {
    samples: Vec<(f64, f64)>,
    pub source: TraceSource,
    pub convention: WidthConvention,
    /// Time at which the producing run stopped at its width floor.
    pub terminated_at: Option<f64>,
}

impl WidthTrace {
    pub fn new(
        samples: Vec<(f64, f64)>,
        source: TraceSource,
        convention: WidthConvention,
        terminated_at: Option<f64>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientData("empty width trace".into()));
        }
        if let Some(&(t, w)) = samples.iter().find(|&&(t, w)| !(t.is_finite() && w.is_finite() && w > 0.0)) {
            return Err(Error::Domain(format!("invalid sample (t = {t}, width = {w})")));
        }
        if samples.windows(2).any(|p| p[1].0 <= p[0].0) {
            return Err(Error::Domain("trace times must be strictly increasing".into()));
        }
        Ok(Self {
            samples,
            source,
            convention,
            terminated_at,
        })
    }

    /// Width `√Y` of a variational run; this is the ansatz parameter.
    pub fn from_series(series: &WidthSeries) -> Self {
        let terminated_at = match series.status {
            WidthStatus::Collapsed { t } => Some(t),
            WidthStatus::Completed => None,
        };
        Self {
            samples: series.widths(),
            source: TraceSource::Variational,
            convention: WidthConvention::Ansatz,
            terminated_at,
        }
    }

    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self {
            samples: traj.widths(),
            source: TraceSource::Pde,
            convention: traj.config.width_convention,
            terminated_at: (traj.status == RunStatus::CollapseUnresolvable).then(|| traj.end_time()),
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn initial_width(&self) -> f64 {
        self.samples[0].1
    }

    pub fn span(&self) -> f64 {
        self.samples.last().unwrap().0 - self.samples[0].0
    }

    /// `max |w - w₀| / w₀`.
    pub fn max_relative_excursion(&self) -> f64 {
        let w0 = self.initial_width();
        self.samples
            .iter()
            .map(|&(_, w)| (w - w0).abs() / w0)
            .fold(0.0, f64::max)
    }

    /// Keeps every `every`-th sample.
    pub fn decimate(&self, every: usize) -> Self {
        let every = every.max(1);
        Self {
            samples: self.samples.iter().step_by(every).copied().collect(),
            ..self.clone()
        }
    }

    /// Linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let s = &self.samples;
        if t < s[0].0 || t > s[s.len() - 1].0 {
            return None;
        }
        let i = s.partition_point(|&(ti, _)| ti <= t);
        if i == 0 {
            return Some(s[0].1);
        }
        if i == s.len() {
            return Some(s[s.len() - 1].1);
        }
        let (t0, w0) = s[i - 1];
        let (t1, w1) = s[i];
        Some(w0 + (w1 - w0) * (t - t0) / (t1 - t0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceRegime {
    Spread,
    Collapse,
    ConstantWidth,
    Oscillating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: TraceRegime,
    pub collapse_time: Option<f64>,
    pub frequency: Option<f64>,
    pub amplitude: Option<f64>,
}

fn local_maxima(samples: &[(f64, f64)]) -> usize {
    samples
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .count()
}

/// Rules, first match wins: collapse (run hit its floor, or width below 25% of
/// the start), constant (excursion under 2%), oscillating (two or more maxima
/// and a measurable frequency), spread (final width above 1.5× the start).
pub fn classify_trace(trace: &WidthTrace) -> Result<RegimeReport> {
    if trace.terminated_at.is_none() && trace.span() < MIN_SPAN {
        return Err(Error::InsufficientData(format!(
            "trace spans {} time units, need {MIN_SPAN}",
            trace.span()
        )));
    }
    let w0 = trace.initial_width();
    let amplitude = trace.max_relative_excursion();
    let report = |regime, collapse_time, frequency| RegimeReport {
        regime,
        collapse_time,
        frequency,
        amplitude: Some(amplitude),
    };

    let below = trace
        .samples
        .iter()
        .find(|&&(_, w)| w < COLLAPSE_FRACTION * w0)
        .map(|&(t, _)| t);
    if let Some(t) = trace.terminated_at.or(below) {
        return Ok(report(TraceRegime::Collapse, Some(t), None));
    }
    if amplitude < CONSTANT_EXCURSION {
        return Ok(report(TraceRegime::ConstantWidth, None, None));
    }
    if local_maxima(&trace.samples) >= 2 {
        if let Ok(f) = estimate_frequency(trace) {
            if f > 0.0 {
                return Ok(report(TraceRegime::Oscillating, None, Some(f)));
            }
        }
    }
    if trace.samples.last().unwrap().1 > SPREAD_FACTOR * w0 {
        return Ok(report(TraceRegime::Spread, None, None));
    }
    Err(Error::Ambiguous)
}

/// Oscillation frequency in cycles per unit time from the mean spacing of
/// upward crossings of the trace mean.
///
/// Crossings are gated by a hysteresis band of 30% of the smaller half-swing,
/// so sampling noise near the mean does not register extra crossings. Returns
/// 0 for a numerically constant trace.
pub fn estimate_frequency(trace: &WidthTrace) -> Result<f64> {
    let s = &trace.samples;
    if s.len() < 4 {
        return Err(Error::InsufficientData(format!("{} samples", s.len())));
    }
    let mean = s.iter().map(|p| p.1).sum::<f64>() / s.len() as f64;
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if hi - lo <= 1e-9 * mean {
        return Ok(0.0);
    }
    let band = 0.3 * (hi - mean).min(mean - lo);

    let mut crossings = Vec::new();
    let mut armed = false;
    let mut last_up: Option<f64> = None;
    for pair in s.windows(2) {
        let (t0, a) = (pair[0].0, pair[0].1 - mean);
        let (t1, b) = (pair[1].0, pair[1].1 - mean);
        if b < -band {
            armed = true;
            last_up = None;
        }
        if armed && a < 0.0 && b >= 0.0 {
            last_up = Some(t0 + (t1 - t0) * (-a) / (b - a));
        }
        if armed && b > band {
            if let Some(t) = last_up {
                crossings.push(t);
            }
            armed = false;
            last_up = None;
        }
    }
    if crossings.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} mean crossings, need 3",
            crossings.len()
        )));
    }
    let periods = (crossings.len() - 1) as f64;
    Ok(periods / (crossings[crossings.len() - 1] - crossings[0]))
}

/// Peak of the Hann-windowed, zero-padded spectrum of the trace, resampled
/// onto a uniform grid. Parabolic interpolation around the peak bin.
pub fn spectral_peak_frequency(trace: &WidthTrace) -> Result<f64> {
    let s = &trace.samples;
    if s.len() < 8 {
        return Err(Error::InsufficientData(format!("{} samples", s.len())));
    }
    let m = s.len();
    let t0 = s[0].0;
    let h = trace.span() / (m - 1) as f64;
    let values: Vec<f64> = (0..m)
        .map(|i| trace.interpolate(t0 + i as f64 * h).unwrap_or(s[m - 1].1))
        .collect();
    let mean = values.iter().sum::<f64>() / m as f64;
    let padded = (8 * m).next_power_of_two();
    let mut buf = vec![num_complex::Complex64::new(0.0, 0.0); padded];
    for (i, v) in values.iter().enumerate() {
        let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (m - 1) as f64).cos();
        buf[i].re = (v - mean) * w;
    }
    Spectral::new(padded).forward(&mut buf);
    let power: Vec<f64> = buf[..padded / 2].iter().map(|c| c.norm_sqr()).collect();
    let (k, _) = power
        .iter()
        .enumerate()
        .skip(1)
        .fold((1, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best });
    let shift = if k + 1 < power.len() {
        let (a, b, c) = (power[k - 1].ln(), power[k].ln(), power[k + 1].ln());
        let denom = a - 2.0 * b + c;
        if denom.abs() > 0.0 {
            0.5 * (a - c) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    Ok((k as f64 + shift) / (padded as f64 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceComparison {
    pub max_rel_dev: f64,
    pub at_t: f64,
}

/// Largest `|w_a - w_b| / max(w_a, w_b)` over `a`'s times, with `b`
/// interpolated linearly.
pub fn compare_traces(a: &WidthTrace, b: &WidthTrace) -> Result<TraceComparison> {
    let mut best: Option<TraceComparison> = None;
    for &(t, wa) in &a.samples {
        let Some(wb) = b.interpolate(t) else { continue };
        let dev = (wa - wb).abs() / wa.max(wb);
        if best.map_or(true, |c| dev > c.max_rel_dev) {
            best = Some(TraceComparison {
                max_rel_dev: dev,
                at_t: t,
            });
        }
    }
    best.ok_or(Error::NoOverlap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub delta: f64,
    /// Signed coupling on the locus, `-|β|`.
    pub beta: Option<f64>,
    /// `max |√Y - δ| / δ` over the run.
    pub max_excursion: Option<f64>,
    pub verified: bool,
}

fn locus_point(delta: f64, tolerance: f64) -> LocusPoint {
    let failed = LocusPoint {
        delta,
        beta: None,
        max_excursion: None,
        verified: false,
    };
    let Ok(magnitude) = beta_for_constant_width(delta) else {
        return failed;
    };
    let beta = -magnitude;
    let run = TrapParams::new(beta, delta, 0.0).and_then(|p| {
        integrate_width(WidthModel::Trap(p), delta * delta, 0.0, LOCUS_T_END, LOCUS_DT)
    });
    match run {
        Ok(series) => {
            let excursion = series
                .samples
                .iter()
                .map(|s| (s.width() - delta).abs() / delta)
                .fold(0.0, f64::max);
            LocusPoint {
                delta,
                beta: Some(beta),
                max_excursion: Some(excursion),
                verified: !series.is_collapsed() && excursion < tolerance,
            }
        }
        Err(_) => LocusPoint {
            beta: Some(beta),
            ..failed
        },
    }
}

/// Runs the variational trap from rest at `Y = δ²` with `β` on the
/// constant-width locus for each `δ`. Points are independent and run in
/// parallel; results keep input order.
pub fn sweep_constant_width(deltas: &[f64], tolerance: f64) -> Vec<LocusPoint> {
    deltas.par_iter().map(|&d| locus_point(d, tolerance)).collect()
}

/// Outcome of a free-particle variational run started at rest: `Collapse` if
/// it hit the floor, `Spread` if `Ẏ` stayed positive after the first step.
pub fn width_outcome(series: &WidthSeries) -> Option<Regime> {
    if series.is_collapsed() {
        return Some(Regime::Collapse);
    }
    let growing = series.samples.len() > 2 && series.samples[1..].iter().all(|s| s.ydot > 0.0);
    growing.then_some(Regime::Spread)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCheck {
    pub gamma: f64,
    pub delta0: f64,
    pub predicted: Regime,
    pub observed: Option<Regime>,
}

impl RegimeCheck {
    pub fn agrees(&self) -> bool {
        self.observed == Some(self.predicted)
    }
}

/// Closed-form regime against the integrated outcome for every
/// `(γ, Δ̄₀)` pair, integrating from rest at `Y = Δ̄₀²`. Row-major in `gammas`.
pub fn free_regime_sweep(gammas: &[f64], deltas: &[f64], t_end: f64, dt: f64) -> Result<Vec<RegimeCheck>> {
    let pairs: Vec<(f64, f64)> = gammas
        .iter()
        .flat_map(|&g| deltas.iter().map(move |&d| (g, d)))
        .collect();
    pairs
        .par_iter()
        .map(|&(gamma, delta0)| {
            let p = FreeParams::new(gamma, delta0)?;
            let series = integrate_width(WidthModel::Free(p), delta0 * delta0, 0.0, t_end, dt)?;
            Ok(RegimeCheck {
                gamma,
                delta0,
                predicted: free_critical(&p).regime,
                observed: width_outcome(&series),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    /// Row `i` is `|ψ|²` at `t[i]`.
    pub rho: Vec<Vec<f64>>,
}

impl DensityMatrix {
    /// Lattice coordinate of the density maximum in each row.
    pub fn peak_positions(&self) -> Vec<f64> {
        self.rho
            .iter()
            .map(|row| {
                let j = row
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |b, (j, &r)| if r > b.1 { (j, r) } else { b })
                    .0;
                self.x[j]
            })
            .collect()
    }
}

pub fn density_matrix(traj: &Trajectory) -> DensityMatrix {
    DensityMatrix {
        x: traj.grid.x().to_vec(),
        t: traj.snapshots.iter().map(|s| s.t).collect(),
        rho: traj.snapshots.iter().map(|s| s.density.clone()).collect(),
    }
}
