//! Log-returns, sliding windows, the landscape-norm series and its abnormality score.
//!
//! For every window of `w` consecutive return vectors the landscape norm `Y_t`
//! is computed from scratch. The score stage then runs
//!
//! ```text
//! delta_i  = Y_i - EMA_{i-1}
//! EMA_i    = EMA_{i-1} + alpha * delta_i
//! EMVar_i  = (1 - alpha) * (EMVar_{i-1} + alpha * delta_i^2)
//! Z_i      = (Y_i - EMA_{i-1}) / sqrt(EMVar_{i-1})
//! ```
//!
//! starting from `EMA_1 = Y_1`, `EMVar_1 = 0`. By default each calendar day is
//! an independent segment: returns never span the overnight gap and the
//! recursion restarts every morning.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, PointCloud};
use crate::homology::compute_persistence;
use crate::io::{AlignedSeries, Minute};
use crate::landscape::{build_landscape_capped, landscape_norm};
use crate::rips::{build_filtration, DEFAULT_MAX_DIM};

pub const DEFAULT_WINDOW: usize = 50;
pub const DEFAULT_ALPHA: f64 = 0.1;
pub const DEFAULT_P: f64 = 1.0;
pub const DEFAULT_EPS: f64 = 0.0;
pub const DEFAULT_WARMUP: usize = 1;

/// One minute's log-return vector, one component per instrument.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnVector {
    pub timestamp: Minute,
    pub components: Vec<f64>,
}

/// A window `{X_{t-w+1}, ..., X_t}` labelled by its last timestamp.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub end: Minute,
    pub cloud: PointCloud,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Points per window.
    pub window: usize,
    /// EMA/EMVar decay.
    pub alpha: f64,
    /// Homology dimensions feeding the landscape.
    pub dims: BTreeSet<usize>,
    /// Landscape norm order.
    pub p: f64,
    /// Top simplex dimension of the Rips complex.
    pub max_dim: usize,
    /// Optional Rips diameter cap.
    pub threshold: Option<f64>,
    /// Essential intervals are truncated at this value when set; otherwise skipped.
    pub inf_cap: Option<f64>,
    /// `Z` is withheld for the first `warmup` records of each segment.
    pub warmup: usize,
    /// `Z` is undefined while the previous EMVar is at or below this floor.
    pub eps: f64,
    /// Treat the whole input as one segment instead of resetting each day.
    pub bridge_days: bool,
    /// Worker threads for window computations; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            alpha: DEFAULT_ALPHA,
            dims: BTreeSet::from([1]),
            p: DEFAULT_P,
            max_dim: DEFAULT_MAX_DIM,
            threshold: None,
            inf_cap: None,
            warmup: DEFAULT_WARMUP,
            eps: DEFAULT_EPS,
            bridge_days: false,
            threads: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.window < 2 {
            return bad(format!("window must be >= 2, got {}", self.window));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.p >= 1.0) || !self.p.is_finite() {
            return bad(format!("p must be a finite number >= 1, got {}", self.p));
        }
        if self.dims.is_empty() {
            return bad("dims must not be empty".into());
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d >= self.max_dim) {
            return bad(format!(
                "homology dimension {d} needs max_dim >= {}, got {}",
                d + 1,
                self.max_dim
            ));
        }
        if let Some(t) = self.threshold {
            if !(t >= 0.0) {
                return bad(format!("threshold must be >= 0, got {t}"));
            }
        }
        if !(self.eps >= 0.0) {
            return bad(format!("eps must be >= 0, got {}", self.eps));
        }
        if self.threads == Some(0) {
            return bad("threads must be >= 1".into());
        }
        Ok(())
    }
}

/// Scored window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyRecord {
    pub timestamp: Minute,
    pub y: f64,
    pub ema: f64,
    pub emvar: f64,
    /// `None` while warming up or when the previous EMVar is at the floor.
    pub z: Option<f64>,
}

/// Per-minute log-returns `ln P_j - ln P_{j-1}` for every instrument.
pub fn log_returns(series: &AlignedSeries) -> Result<Vec<ReturnVector>> {
    log_returns_from(series.timestamps(), series.closes(), series.names())
}

/// As [`log_returns`], on raw columns.
pub fn log_returns_from(timestamps: &[Minute], closes: &[Vec<f64>], names: &[String]) -> Result<Vec<ReturnVector>> {
    for (i, col) in closes.iter().enumerate() {
        if col.len() != timestamps.len() {
            return Err(Error::Alignment(format!(
                "instrument {i} has {} prices for {} timestamps",
                col.len(),
                timestamps.len()
            )));
        }
        if let Some(j) = col.iter().position(|&p| !(p > 0.0) || !p.is_finite()) {
            let name = names.get(i).map(String::as_str).unwrap_or("?");
            return Err(Error::Domain(format!(
                "non-positive price {} for {name} at minute {}",
                col[j], timestamps[j].0
            )));
        }
    }
    if timestamps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Alignment("timestamps not strictly increasing".into()));
    }
    let logs: Vec<Vec<f64>> = closes.iter().map(|c| c.iter().map(|p| p.ln()).collect()).collect();
    Ok((1..timestamps.len())
        .map(|j| ReturnVector {
            timestamp: timestamps[j],
            components: logs.iter().map(|l| l[j] - l[j - 1]).collect(),
        })
        .collect())
}

/// All windows of `w` consecutive returns; empty when there are fewer than `w`.
pub fn sliding_windows(returns: &[ReturnVector], w: usize) -> Vec<Window> {
    if w == 0 || returns.len() < w {
        return Vec::new();
    }
    returns
        .windows(w)
        .map(|chunk| {
            let dim = chunk[0].components.len();
            let coords = chunk.iter().flat_map(|r| r.components.iter().copied()).collect();
            Window {
                end: chunk[w - 1].timestamp,
                cloud: PointCloud::from_flat(coords, dim).expect("returns share one dimension"),
            }
        })
        .collect()
}

/// Landscape norm of one point cloud under `cfg`.
pub fn window_norm(cloud: &PointCloud, cfg: &PipelineConfig) -> Result<f64> {
    let dist = distance_matrix(cloud);
    let filt = build_filtration(&dist, cfg.max_dim, cfg.threshold)?;
    let diag = compute_persistence(&filt)?;
    let land = build_landscape_capped(&diag, &cfg.dims, cfg.inf_cap);
    landscape_norm(&land, cfg.p)
}

/// `(timestamp, Y)` for every window, in input order.
pub fn norm_series(windows: &[Window], cfg: &PipelineConfig) -> Result<Vec<(Minute, f64)>> {
    cfg.validate()?;
    with_pool(cfg.threads, || {
        windows
            .par_iter()
            .map(|w| window_norm(&w.cloud, cfg).map(|y| (w.end, y)))
            .collect()
    })
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(f),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmaStep {
    pub ema: f64,
    pub emvar: f64,
    pub delta: f64,
}

/// One step of the exponential mean/variance recursion.
pub fn ema_emvar_step(prev_ema: f64, prev_emvar: f64, y: f64, alpha: f64) -> EmaStep {
    let delta = y - prev_ema;
    EmaStep {
        ema: prev_ema + alpha * delta,
        emvar: (1.0 - alpha) * (prev_emvar + alpha * delta * delta),
        delta,
    }
}

/// `(y - prev_ema) / sqrt(prev_emvar)`, or `None` when `prev_emvar <= eps`.
pub fn z_score(y: f64, prev_ema: f64, prev_emvar: f64, eps: f64) -> Option<f64> {
    if prev_emvar > eps && prev_emvar > 0.0 {
        Some((y - prev_ema) / prev_emvar.sqrt())
    } else {
        None
    }
}

/// Runs the recursion over one segment of `Y` values.
pub fn score_series(ys: &[(Minute, f64)], alpha: f64, eps: f64, warmup: usize) -> Vec<AnomalyRecord> {
    let mut out = Vec::with_capacity(ys.len());
    let mut prev: Option<(f64, f64)> = None;
    for (i, &(timestamp, y)) in ys.iter().enumerate() {
        let (ema, emvar, z) = match prev {
            None => (y, 0.0, None),
            Some((pe, pv)) => {
                let step = ema_emvar_step(pe, pv, y, alpha);
                let z = if i >= warmup { z_score(y, pe, pv, eps) } else { None };
                (step.ema, step.emvar, z)
            }
        };
        prev = Some((ema, emvar));
        out.push(AnomalyRecord {
            timestamp,
            y,
            ema,
            emvar,
            z,
        });
    }
    out
}

/// Row ranges scored independently: one per day, or the whole input when bridging.
pub fn segments(series: &AlignedSeries, bridge_days: bool) -> Vec<std::ops::Range<usize>> {
    if bridge_days {
        if series.is_empty() {
            Vec::new()
        } else {
            vec![0..series.len()]
        }
    } else {
        series.day_ranges()
    }
}

/// `Y` series for each segment of the input.
pub fn segment_norms(series: &AlignedSeries, cfg: &PipelineConfig) -> Result<Vec<Vec<(Minute, f64)>>> {
    cfg.validate()?;
    let mut windows: Vec<Window> = Vec::new();
    let mut bounds = Vec::new();
    for range in segments(series, cfg.bridge_days) {
        let ts = &series.timestamps()[range.clone()];
        let cols: Vec<Vec<f64>> = series.closes().iter().map(|c| c[range.clone()].to_vec()).collect();
        let returns = log_returns_from(ts, &cols, series.names())?;
        let start = windows.len();
        windows.extend(sliding_windows(&returns, cfg.window));
        bounds.push(start..windows.len());
    }
    let ys = norm_series(&windows, cfg)?;
    Ok(bounds.into_iter().map(|b| ys[b].to_vec()).collect())
}

/// Full pipeline: one record per window, in timestamp order.
pub fn run_pipeline(series: &AlignedSeries, cfg: &PipelineConfig) -> Result<Vec<AnomalyRecord>> {
    let segs = segment_norms(series, cfg)?;
    Ok(segs
        .iter()
        .flat_map(|ys| score_series(ys, cfg.alpha, cfg.eps, cfg.warmup))
        .collect())
}

/// Summary of one scan in an `alpha` sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub max_abs_z: Option<f64>,
    pub argmax: Option<Minute>,
}

/// Largest `|z|` and where it occurs; the earliest wins ties.
pub fn max_abs_z(records: &[AnomalyRecord]) -> Option<(f64, Minute)> {
    records
        .iter()
        .filter_map(|r| r.z.map(|z| (z.abs(), r.timestamp)))
        .fold(None, |best, (z, t)| match best {
            Some((b, _)) if b >= z => best,
            _ => Some((z, t)),
        })
}

/// Scans once per `alpha`, reusing the `Y` series (which does not depend on `alpha`).
pub fn alpha_sweep(series: &AlignedSeries, cfg: &PipelineConfig, alphas: &[f64]) -> Result<Vec<SweepRow>> {
    if alphas.is_empty() {
        return Err(Error::Config("alpha grid is empty".into()));
    }
    for &alpha in alphas {
        PipelineConfig { alpha, ..cfg.clone() }.validate()?;
    }
    let segs = segment_norms(series, cfg)?;
    Ok(alphas
        .iter()
        .map(|&alpha| {
            let records: Vec<AnomalyRecord> = segs
                .iter()
                .flat_map(|ys| score_series(ys, alpha, cfg.eps, cfg.warmup))
                .collect();
            let best = max_abs_z(&records);
            SweepRow {
                alpha,
                max_abs_z: best.map(|b| b.0),
                argmax: best.map(|b| b.1),
            }
        })
        .collect())
}
