//! Timestamp alignment of several instruments into one price table.

use std::collections::BTreeMap;
use std::ops::Range;

use chrono::NaiveTime;

use super::bars::{BarRecord, InstrumentBars};
use super::time::{Minute, TimeStyle};
use crate::error::{Error, Result};

/// Default forward-fill cap, in minutes.
pub const DEFAULT_MAX_GAP: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlignPolicy {
    /// Keep only minutes present for every instrument.
    #[default]
    Intersection,
    /// Keep every minute seen by any instrument, carrying an instrument's last
    /// close forward when it was observed at most `max_gap` minutes earlier.
    ForwardFill { max_gap: i64 },
}

/// Close prices of several instruments on a common, strictly increasing timeline.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSeries {
    names: Vec<String>,
    timestamps: Vec<Minute>,
    closes: Vec<Vec<f64>>,
    style: TimeStyle,
}

impl AlignedSeries {
    /// `closes[i]` is the price column of instrument `i`.
    pub fn new(names: Vec<String>, timestamps: Vec<Minute>, closes: Vec<Vec<f64>>, style: TimeStyle) -> Result<Self> {
        if closes.is_empty() {
            return Err(Error::Alignment("no instruments".into()));
        }
        if names.len() != closes.len() {
            return Err(Error::Alignment(format!(
                "{} names for {} price columns",
                names.len(),
                closes.len()
            )));
        }
        if let Some(w) = timestamps.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Alignment(format!(
                "timestamps not strictly increasing at {}",
                style.format(w[1])
            )));
        }
        for (name, col) in names.iter().zip(&closes) {
            if col.len() != timestamps.len() {
                return Err(Error::Alignment(format!(
                    "instrument {name} has {} prices for {} timestamps",
                    col.len(),
                    timestamps.len()
                )));
            }
        }
        Ok(Self {
            names,
            timestamps,
            closes,
            style,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn timestamps(&self) -> &[Minute] {
        &self.timestamps
    }

    pub fn closes(&self) -> &[Vec<f64>] {
        &self.closes
    }

    pub fn style(&self) -> TimeStyle {
        self.style
    }

    pub fn instruments(&self) -> usize {
        self.closes.len()
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    /// Row subset, keeping instruments and style.
    pub fn slice(&self, range: Range<usize>) -> Self {
        Self {
            names: self.names.clone(),
            timestamps: self.timestamps[range.clone()].to_vec(),
            closes: self.closes.iter().map(|c| c[range.clone()].to_vec()).collect(),
            style: self.style,
        }
    }

    /// Contiguous row ranges sharing one calendar day.
    pub fn day_ranges(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.timestamps.len() {
            if i == self.timestamps.len() || self.timestamps[i].day() != self.timestamps[start].day() {
                if i > start {
                    out.push(start..i);
                }
                start = i;
            }
        }
        out
    }

    /// Keeps rows whose time of day lies in `[start, end)`.
    pub fn filter_session(&self, start: NaiveTime, end: NaiveTime) -> Self {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let t = self.timestamps[i].to_datetime().time();
                if start <= end {
                    t >= start && t < end
                } else {
                    t >= start || t < end
                }
            })
            .collect();
        Self {
            names: self.names.clone(),
            timestamps: keep.iter().map(|&i| self.timestamps[i]).collect(),
            closes: self
                .closes
                .iter()
                .map(|c| keep.iter().map(|&i| c[i]).collect())
                .collect(),
            style: self.style,
        }
    }
}

/// Aligns per-instrument bar lists onto one timeline.
pub fn align(series: &[InstrumentBars], policy: AlignPolicy, style: TimeStyle) -> Result<AlignedSeries> {
    if series.is_empty() {
        return Err(Error::Alignment("no instruments".into()));
    }
    let names: Vec<String> = series.iter().map(|s| s.name.clone()).collect();
    let k = series.len();
    let mut by_time: BTreeMap<Minute, Vec<Option<f64>>> = BTreeMap::new();
    for (i, s) in series.iter().enumerate() {
        for &BarRecord { timestamp, close } in &s.bars {
            by_time.entry(timestamp).or_insert_with(|| vec![None; k])[i] = Some(close);
        }
    }

    let mut timestamps = Vec::new();
    let mut closes = vec![Vec::new(); k];
    match policy {
        AlignPolicy::Intersection => {
            for (t, row) in &by_time {
                if row.iter().all(Option::is_some) {
                    timestamps.push(*t);
                    for (col, v) in closes.iter_mut().zip(row) {
                        col.push(v.expect("checked"));
                    }
                }
            }
        }
        AlignPolicy::ForwardFill { max_gap } => {
            if max_gap < 0 {
                return Err(Error::Config(format!("max gap must be >= 0, got {max_gap}")));
            }
            let mut last: Vec<Option<(Minute, f64)>> = vec![None; k];
            for (t, row) in &by_time {
                let mut filled = Vec::with_capacity(k);
                for (slot, v) in last.iter_mut().zip(row) {
                    if let Some(v) = v {
                        *slot = Some((*t, *v));
                        filled.push(Some(*v));
                    } else {
                        filled.push(match slot {
                            Some((seen, v)) if t.0 - seen.0 <= max_gap => Some(*v),
                            _ => None,
                        });
                    }
                }
                if filled.iter().all(Option::is_some) {
                    timestamps.push(*t);
                    for (col, v) in closes.iter_mut().zip(filled) {
                        col.push(v.expect("checked"));
                    }
                }
            }
        }
    }
    if timestamps.is_empty() {
        return Err(Error::Alignment("instruments share no timestamps".into()));
    }
    AlignedSeries::new(names, timestamps, closes, style)
}
