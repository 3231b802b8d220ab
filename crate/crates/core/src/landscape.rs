//! Persistence landscapes and their `L^p` norms.
//!
//! Each level `lambda_k` is the pointwise k-th largest value of the tent
//! functions of a diagram's finite intervals. Levels are piecewise linear and
//! are stored exactly as breakpoint lists, so the `L^1` norm is an exact sum
//! of trapezoids.
//!
//! Essential (infinite) intervals are skipped unless a cap is supplied, in
//! which case they enter as `(birth, cap)`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;

/// The triangular bump `x - b` rising to `(d - b) / 2` at the midpoint, then `d - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tent {
    birth: f64,
    death: f64,
}

impl Tent {
    pub fn new(birth: f64, death: f64) -> Result<Self> {
        if !(birth < death) || !birth.is_finite() || !death.is_finite() {
            return Err(Error::Domain(format!("tent needs finite b < d, got ({birth}, {death})")));
        }
        Ok(Self { birth, death })
    }

    pub fn birth(&self) -> f64 {
        self.birth
    }

    pub fn death(&self) -> f64 {
        self.death
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.birth + self.death)
    }

    pub fn height(&self) -> f64 {
        0.5 * (self.death - self.birth)
    }

    pub fn area(&self) -> f64 {
        let h = self.height();
        h * h
    }

    pub fn eval(&self, x: f64) -> f64 {
        tent_eval(self, x)
    }
}

pub fn tent_eval(t: &Tent, x: f64) -> f64 {
    if x <= t.birth || x >= t.death {
        0.0
    } else if x <= t.midpoint() {
        x - t.birth
    } else {
        t.death - x
    }
}

/// The tent edge a level follows between two breakpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Edge {
    Zero,
    Rising(f64),
    Falling(f64),
}

impl Edge {
    fn at(self, x: f64) -> f64 {
        match self {
            Edge::Zero => 0.0,
            Edge::Rising(b) => x - b,
            Edge::Falling(d) => d - x,
        }
    }
}

/// One landscape level: breakpoints sorted by `x`, zero at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    points: Vec<(f64, f64)>,
    // edges[i] spans points[i]..points[i + 1]
    edges: Vec<Edge>,
}

impl Level {
    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Evaluates the tent edge under `x` directly, so values match a pointwise
    /// k-max of tents bit for bit.
    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.points;
        let (first, last) = match (pts.first(), pts.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return 0.0,
        };
        if x <= first.0 || x >= last.0 {
            return 0.0;
        }
        let i = pts.partition_point(|p| p.0 <= x);
        if x == pts[i - 1].0 {
            return pts[i - 1].1;
        }
        self.edges[i - 1].at(x)
    }

    /// `integral |lambda_k|^p dx`, exact per linear piece.
    pub fn integral_pow(&self, p: f64) -> f64 {
        self.points
            .windows(2)
            .map(|w| segment_integral(w[0], w[1], p))
            .sum()
    }
}

fn segment_integral((x0, y0): (f64, f64), (x1, y1): (f64, f64), p: f64) -> f64 {
    let width = x1 - x0;
    if width <= 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return 0.5 * width * (y0 + y1);
    }
    let (lo, hi) = if y0 <= y1 { (y0, y1) } else { (y1, y0) };
    if hi <= 0.0 {
        return 0.0;
    }
    let dy = hi - lo;
    if dy <= 1e-6 * hi {
        // nearly flat: midpoint expansion avoids cancellation in the closed form
        let m = 0.5 * (lo + hi);
        let r = dy / m;
        return width * m.powf(p) * (1.0 + p * (p - 1.0) * r * r / 24.0);
    }
    width * (hi.powf(p + 1.0) - lo.powf(p + 1.0)) / ((p + 1.0) * dy)
}

/// Ordered sequence of levels `lambda_1 >= lambda_2 >= ...`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Landscape {
    levels: Vec<Level>,
}

impl Landscape {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `lambda_k(x)` with 1-based `k`; zero beyond the last level.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        match k.checked_sub(1).and_then(|i| self.levels.get(i)) {
            Some(l) => l.eval(x),
            None => 0.0,
        }
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        landscape_norm(self, p)
    }
}

/// Landscape of the finite intervals whose dimension is in `dims`.
pub fn build_landscape(diag: &PersistenceDiagram, dims: &BTreeSet<usize>) -> Landscape {
    build_landscape_capped(diag, dims, None)
}

/// As [`build_landscape`], additionally truncating essential intervals to `(birth, cap)`.
pub fn build_landscape_capped(diag: &PersistenceDiagram, dims: &BTreeSet<usize>, cap: Option<f64>) -> Landscape {
    let tents: Vec<Tent> = diag
        .intervals()
        .iter()
        .filter(|i| dims.contains(&i.dim))
        .filter_map(|i| {
            let death = if i.is_essential() { cap? } else { i.death };
            Tent::new(i.birth, death).ok()
        })
        .collect();
    landscape_from_tents(&tents)
}

/// Exact k-max envelopes of a tent multiset.
///
/// Between consecutive critical abscissae (every birth, midpoint, death and
/// every crossing of a rising edge with a falling edge) no tent has a kink and
/// no two tents swap order, so every level is linear there.
pub fn landscape_from_tents(tents: &[Tent]) -> Landscape {
    if tents.is_empty() {
        return Landscape::default();
    }
    let mut xs: Vec<f64> = Vec::with_capacity(tents.len() * 3);
    for t in tents {
        xs.extend([t.birth, t.midpoint(), t.death]);
    }
    for a in tents {
        for b in tents {
            // rising edge of `a` meets falling edge of `b`
            let x = 0.5 * (a.birth + b.death);
            if x > a.birth && x < a.midpoint() && x > b.midpoint() && x < b.death {
                xs.push(x);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(xs.len());
    let mut depth = 0;
    for &x in &xs {
        let mut vals: Vec<f64> = tents.iter().map(|t| t.eval(x)).filter(|&v| v > 0.0).collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        depth = depth.max(vals.len());
        columns.push(vals);
    }

    // order of the tents inside each open segment, read off at its midpoint
    let segment_edges: Vec<Vec<Edge>> = xs
        .windows(2)
        .map(|w| {
            let m = 0.5 * (w[0] + w[1]);
            let mut live: Vec<(f64, Edge)> = tents
                .iter()
                .filter(|t| m > t.birth && m < t.death)
                .map(|t| {
                    let edge = if m <= t.midpoint() { Edge::Rising(t.birth) } else { Edge::Falling(t.death) };
                    (edge.at(m), edge)
                })
                .collect();
            live.sort_by(|a, b| b.0.total_cmp(&a.0));
            live.into_iter().map(|(_, e)| e).collect()
        })
        .collect();

    let levels = (0..depth)
        .map(|k| {
            let points: Vec<(f64, f64)> = xs
                .iter()
                .zip(&columns)
                .map(|(&x, vals)| (x, vals.get(k).copied().unwrap_or(0.0)))
                .collect();
            let edges: Vec<Edge> = segment_edges
                .iter()
                .map(|live| live.get(k).copied().unwrap_or(Edge::Zero))
                .collect();
            simplify(points, edges)
        })
        .collect();
    Landscape { levels }
}

/// Drops zero runs outside the support and breakpoints where the level keeps
/// following the same tent edge.
fn simplify(points: Vec<(f64, f64)>, edges: Vec<Edge>) -> Level {
    let first = points.iter().position(|p| p.1 > 0.0);
    let last = points.iter().rposition(|p| p.1 > 0.0);
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f.saturating_sub(1), (l + 1).min(points.len() - 1)),
        _ => {
            return Level {
                points: Vec::new(),
                edges: Vec::new(),
            }
        }
    };
    let mut out_points = vec![points[first]];
    let mut out_edges: Vec<Edge> = Vec::new();
    for i in first + 1..=last {
        let edge = edges[i - 1];
        if out_edges.last() == Some(&edge) {
            out_points.pop();
        } else {
            out_edges.push(edge);
        }
        out_points.push(points[i]);
    }
    Level {
        points: out_points,
        edges: out_edges,
    }
}

/// `sum_k (integral |lambda_k|^p)^(1/p)`: per-level norms summed over levels.
pub fn landscape_norm(l: &Landscape, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("norm order must satisfy 1 <= p < inf, got {p}")));
    }
    Ok(l.levels
        .iter()
        .map(|lvl| {
            let i = lvl.integral_pow(p);
            if p == 1.0 {
                i
            } else {
                i.powf(1.0 / p)
            }
        })
        .sum())
}
