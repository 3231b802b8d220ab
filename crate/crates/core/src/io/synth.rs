//! Seeded synthetic minute bars with an optional crash-and-rebound shock.
//!
//! Log prices follow a correlated Gaussian random walk. Each minute, every
//! instrument receives `vol * (sqrt(rho) * f + sqrt(1 - rho) * e_i)` where
//! `f` is a common factor and `e_i` an idiosyncratic draw, all standard
//! normal. Draws come from ChaCha8 seeded with the user seed, consumed in a
//! fixed order (`f`, then `e_0 .. e_{k-1}`) each minute, so a seed fully
//! determines the output.
//!
//! A shock adds a deterministic log-price offset to every instrument: linear
//! from zero down to `ln(1 - depth)` over the first half of the shock, then
//! linearly back to zero. Noise inside the shock is scaled by
//! `vol_multiplier`.

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::align::AlignedSeries;
use super::time::{Minute, TimeStyle};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSpec {
    /// Row index (across all days) of the first shocked minute.
    pub start: usize,
    /// Fractional drawdown at the trough, e.g. `0.06`.
    pub depth: f64,
    /// Total minutes from onset until the offset returns to zero.
    pub duration: usize,
    /// Noise scale inside the shock relative to `volatility`.
    pub vol_multiplier: f64,
}

impl ShockSpec {
    /// Log-price offset `k` minutes after onset.
    pub fn offset(&self, k: usize) -> f64 {
        if self.duration == 0 || k > self.duration {
            return 0.0;
        }
        let trough = (1.0 - self.depth).ln();
        let fall = self.duration.div_ceil(2);
        if k <= fall {
            trough * k as f64 / fall as f64
        } else {
            trough * (self.duration - k) as f64 / (self.duration - fall) as f64
        }
    }

    pub fn contains(&self, row: usize) -> bool {
        row >= self.start && row <= self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub instruments: usize,
    pub days: usize,
    pub minutes_per_day: usize,
    /// First minute of each session, in minutes after midnight.
    pub session_start: u32,
    pub start_date: NaiveDate,
    pub base_price: f64,
    /// Per-minute log-return standard deviation.
    pub volatility: f64,
    /// Pairwise correlation of instrument returns, in `[0, 1]`.
    pub correlation: f64,
    pub shock: Option<ShockSpec>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            instruments: 3,
            days: 1,
            minutes_per_day: 1430,
            session_start: 0,
            start_date: NaiveDate::from_ymd_opt(2010, 5, 3).expect("valid date"),
            base_price: 1000.0,
            volatility: 3e-4,
            correlation: 0.8,
            shock: None,
        }
    }
}

impl SynthSpec {
    pub fn len(&self) -> usize {
        self.days * self.minutes_per_day
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Timestamp of row `row`.
    pub fn timestamp(&self, row: usize) -> Minute {
        let day = (row / self.minutes_per_day) as i64;
        let minute = (row % self.minutes_per_day) as i64;
        Minute::from_date(self.start_date).offset(day * 1440 + self.session_start as i64 + minute)
    }
}

/// Generates the series described by `spec` from `seed`.
pub fn synth_generate(seed: u64, spec: &SynthSpec) -> AlignedSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = spec.instruments.max(1);
    let n = spec.len();
    let rho = spec.correlation.clamp(0.0, 1.0);
    let (common, idio) = (rho.sqrt(), (1.0 - rho).sqrt());
    let base = spec.base_price.ln();

    let mut walk = vec![0.0f64; k];
    let mut closes = vec![Vec::with_capacity(n); k];
    let mut draws = vec![0.0f64; k];
    for row in 0..n {
        let (offset, vol) = match spec.shock {
            Some(s) if s.contains(row) => (s.offset(row - s.start), spec.volatility * s.vol_multiplier),
            _ => (0.0, spec.volatility),
        };
        if row > 0 {
            let f: f64 = StandardNormal.sample(&mut rng);
            for d in draws.iter_mut() {
                *d = StandardNormal.sample(&mut rng);
            }
            for (w, e) in walk.iter_mut().zip(&draws) {
                *w += vol * (common * f + idio * e);
            }
        }
        for (col, w) in closes.iter_mut().zip(&walk) {
            col.push((base + w + offset).exp());
        }
    }

    let names = (0..k).map(|i| format!("inst{i}")).collect();
    let timestamps = (0..n).map(|r| spec.timestamp(r)).collect();
    AlignedSeries::new(names, timestamps, closes, TimeStyle::Iso).expect("generator output is aligned")
}
