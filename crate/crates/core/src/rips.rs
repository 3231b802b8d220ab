//! Vietoris-Rips filtrations built from a distance matrix.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;

/// Default top simplex dimension; enough to resolve `H0` and `H1`.
pub const DEFAULT_MAX_DIM: usize = 2;

/// A simplex tagged with the scale at which it enters the filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredSimplex {
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl FilteredSimplex {
    pub fn new(vertices: Vec<usize>, value: f64) -> Self {
        Self { vertices, value }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

/// Reduction order: value, then dimension, then lexicographic vertices.
pub fn filtration_order(a: &FilteredSimplex, b: &FilteredSimplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices in reduction order together with the dimension bound used to build them.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<FilteredSimplex>,
    max_dim: usize,
    complete: bool,
}

impl Filtration {
    /// Wraps an arbitrary simplex list. No checks are made here; persistence
    /// computation validates ordering and face-closure before reducing.
    ///
    /// `complete` states that every simplex on the vertex set is present, so
    /// homology is known in every dimension up to and including `max_dim`.
    pub fn from_simplices(simplices: Vec<FilteredSimplex>, max_dim: usize, complete: bool) -> Self {
        Self {
            simplices,
            max_dim,
            complete,
        }
    }

    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Homology dimensions `0..bound` are fully determined by this filtration.
    pub fn homology_bound(&self) -> usize {
        if self.complete {
            self.max_dim + 1
        } else {
            self.max_dim
        }
    }
}

/// Builds the Rips filtration up to `max_dim`, keeping only simplices of
/// diameter at most `threshold` when one is given.
///
/// `max_dim` larger than `n - 1` is clamped. With `max_dim >= n - 1` and no
/// threshold the result contains every simplex on the vertex set.
pub fn build_filtration(
    dist: &DistanceMatrix,
    max_dim: usize,
    threshold: Option<f64>,
) -> Result<Filtration> {
    if let Some(t) = threshold {
        if !(t >= 0.0) {
            return Err(Error::Config(format!("threshold must be >= 0, got {t}")));
        }
    }
    let n = dist.len();
    let clamped = max_dim.min(n.saturating_sub(1));
    let limit = threshold.unwrap_or(f64::INFINITY);

    let mut simplices: Vec<FilteredSimplex> =
        (0..n).map(|v| FilteredSimplex::new(vec![v], 0.0)).collect();
    let mut frontier: Vec<FilteredSimplex> = simplices.clone();
    for _ in 0..clamped {
        let mut next = Vec::new();
        for s in &frontier {
            let last = *s.vertices.last().expect("simplices are non-empty");
            'cand: for v in last + 1..n {
                let mut value = s.value;
                for &u in &s.vertices {
                    let d = dist.get(u, v);
                    if d > limit {
                        continue 'cand;
                    }
                    value = value.max(d);
                }
                let mut vertices = Vec::with_capacity(s.vertices.len() + 1);
                vertices.extend_from_slice(&s.vertices);
                vertices.push(v);
                next.push(FilteredSimplex::new(vertices, value));
            }
        }
        simplices.extend(next.iter().cloned());
        frontier = next;
    }
    simplices.sort_by(filtration_order);

    Ok(Filtration {
        simplices,
        max_dim: clamped,
        complete: clamped + 1 >= n && threshold.is_none(),
    })
}
