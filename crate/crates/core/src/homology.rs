//! Persistence intervals from a filtration by boundary-matrix column reduction over `Z/2`.
//!
//! Coefficients are taken in `Z/2`. Rips complexes of point clouds carry no
//! torsion in the dimensions computed here, so the resulting diagrams agree
//! with those over the reals.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rips::{filtration_order, Filtration};

/// A single birth/death pair. Essential classes have `death == f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceInterval {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl PersistenceInterval {
    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

impl fmt::Display for PersistenceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{} [{}, {})", self.dim, self.birth, self.death)
    }
}

/// Multiset of intervals, sorted by `(dim, birth, death)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    intervals: Vec<PersistenceInterval>,
}

impl PersistenceDiagram {
    pub fn new(mut intervals: Vec<PersistenceInterval>) -> Self {
        intervals.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        Self { intervals }
    }

    pub fn intervals(&self) -> &[PersistenceInterval] {
        &self.intervals
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &PersistenceInterval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Betti number in `dim` at scale `eps`: intervals with `birth <= eps < death`.
    pub fn betti(&self, dim: usize, eps: f64) -> usize {
        self.in_dim(dim)
            .filter(|i| i.birth <= eps && eps < i.death)
            .count()
    }
}

/// Column reduction strategy. Both produce the same pairing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Reduction {
    /// Left-to-right column additions over the whole matrix.
    Standard,
    /// Reduce top dimension first and zero out columns already known to be births.
    Clearing,
    /// Reduce the coboundary matrix from dimension 0 upward, with clearing.
    /// Never touches columns of the top dimension, which dominate Rips complexes.
    #[default]
    Cohomology,
}

/// Persistence diagram of `filt` using the default reduction.
pub fn compute_persistence(filt: &Filtration) -> Result<PersistenceDiagram> {
    compute_persistence_with(filt, Reduction::default())
}

pub fn compute_persistence_with(filt: &Filtration, reduction: Reduction) -> Result<PersistenceDiagram> {
    let boundary = BoundaryMatrix::new(filt)?;
    let dims = boundary.dims.clone();
    let pairs = match reduction {
        Reduction::Standard => boundary.reduce_standard(),
        Reduction::Clearing => boundary.reduce_clearing(),
        Reduction::Cohomology => boundary.reduce_cohomology(),
    };

    let simplices = filt.simplices();
    let bound = filt.homology_bound();
    let mut paired = vec![false; simplices.len()];
    let mut intervals = Vec::new();
    for &(birth, death) in &pairs {
        paired[birth] = true;
        paired[death] = true;
        let (b, d) = (simplices[birth].value, simplices[death].value);
        if b < d {
            intervals.push(PersistenceInterval {
                dim: dims[birth],
                birth: b,
                death: d,
            });
        }
    }
    for (i, s) in simplices.iter().enumerate() {
        if !paired[i] && dims[i] < bound {
            intervals.push(PersistenceInterval {
                dim: dims[i],
                birth: s.value,
                death: f64::INFINITY,
            });
        }
    }
    Ok(PersistenceDiagram::new(intervals))
}

const NO_PIVOT: usize = usize::MAX;

/// Position lookup for simplices of one dimension, keyed by combinatorial index.
enum SimplexIndex {
    Dense(Vec<usize>),
    Sparse(HashMap<u64, usize>),
}

impl SimplexIndex {
    fn new(vertex_bound: usize, dim: usize, count: usize) -> Self {
        let range = binomial(vertex_bound as u64, dim as u64 + 1).unwrap_or(u64::MAX);
        if range <= (4 * count as u64).max(1 << 16) {
            SimplexIndex::Dense(vec![NO_PIVOT; range as usize])
        } else {
            SimplexIndex::Sparse(HashMap::with_capacity(count))
        }
    }

    /// False if the key was already present.
    fn insert(&mut self, key: u64, pos: usize) -> bool {
        match self {
            SimplexIndex::Dense(v) => match v.get_mut(key as usize) {
                Some(slot) if *slot == NO_PIVOT => {
                    *slot = pos;
                    true
                }
                _ => false,
            },
            SimplexIndex::Sparse(m) => m.insert(key, pos).is_none(),
        }
    }

    fn get(&self, key: u64) -> Option<usize> {
        match self {
            SimplexIndex::Dense(v) => v.get(key as usize).copied().filter(|&p| p != NO_PIVOT),
            SimplexIndex::Sparse(m) => m.get(&key).copied(),
        }
    }
}

/// Sparse `Z/2` boundary matrix; each column holds sorted row indices.
struct BoundaryMatrix {
    columns: Vec<Vec<usize>>,
    dims: Vec<usize>,
    max_dim: usize,
}

fn simplex_key(vertices: &[usize]) -> Option<u64> {
    // combinatorial number system; unique among simplices of one dimension
    let mut key: u64 = 0;
    for (i, &v) in vertices.iter().enumerate() {
        key = key.checked_add(binomial(v as u64, i as u64 + 1)?)?;
    }
    Some(key)
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

impl BoundaryMatrix {
    fn new(filt: &Filtration) -> Result<Self> {
        let simplices = filt.simplices();
        let mut counts = vec![0usize; filt.max_dim() + 1];
        let mut vertex_bound = 0;
        for s in simplices {
            if let Some(c) = counts.get_mut(s.dim()) {
                *c += 1;
            }
            if let Some(&v) = s.vertices.last() {
                vertex_bound = vertex_bound.max(v + 1);
            }
        }
        let mut index: Vec<SimplexIndex> = counts
            .iter()
            .enumerate()
            .map(|(dim, &count)| SimplexIndex::new(vertex_bound, dim, count))
            .collect();
        let mut columns = Vec::with_capacity(simplices.len());
        let mut dims = Vec::with_capacity(simplices.len());
        let mut face = Vec::with_capacity(filt.max_dim() + 1);

        for (j, s) in simplices.iter().enumerate() {
            if s.vertices.is_empty() {
                return Err(Error::Structure(format!("simplex {j} has no vertices")));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structure(format!(
                    "simplex {j} vertices {:?} are not strictly increasing",
                    s.vertices
                )));
            }
            if !(s.value >= 0.0) {
                return Err(Error::Structure(format!("simplex {j} has invalid value {}", s.value)));
            }
            let dim = s.dim();
            if dim > filt.max_dim() {
                return Err(Error::Structure(format!(
                    "simplex {j} has dimension {dim} above max_dim {}",
                    filt.max_dim()
                )));
            }
            if j > 0 && filtration_order(&simplices[j - 1], s).is_gt() {
                return Err(Error::Structure(format!("simplices {} and {j} out of order", j - 1)));
            }
            let key = simplex_key(&s.vertices)
                .ok_or_else(|| Error::Structure("vertex indices too large".into()))?;
            if !index[dim].insert(key, j) {
                return Err(Error::Structure(format!("duplicate simplex {:?}", s.vertices)));
            }

            let mut col = Vec::with_capacity(dim + 1);
            if dim > 0 {
                for skip in 0..=dim {
                    face.clear();
                    face.extend(
                        s.vertices
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != skip)
                            .map(|(_, &v)| v),
                    );
                    let pos = simplex_key(&face)
                        .and_then(|k| index[dim - 1].get(k))
                        .ok_or_else(|| {
                            Error::Structure(format!(
                                "face {face:?} of {:?} is missing or appears after it",
                                s.vertices
                            ))
                        })?;
                    col.push(pos);
                }
                col.sort_unstable();
            }
            columns.push(col);
            dims.push(dim);
        }
        Ok(Self {
            columns,
            dims,
            max_dim: filt.max_dim(),
        })
    }

    fn reduce_standard(mut self) -> Vec<(usize, usize)> {
        let mut pivot_col = vec![NO_PIVOT; self.columns.len()];
        let mut pairs = Vec::new();
        let mut scratch = Vec::new();
        for j in 0..self.columns.len() {
            if let Some(low) = self.reduce_column(j, &pivot_col, &mut scratch) {
                pivot_col[low] = j;
                pairs.push((low, j));
            }
        }
        pairs
    }

    fn reduce_clearing(mut self) -> Vec<(usize, usize)> {
        let mut pivot_col = vec![NO_PIVOT; self.columns.len()];
        let mut pairs = Vec::new();
        let mut scratch = Vec::new();
        for dim in (1..=self.max_dim).rev() {
            for j in 0..self.columns.len() {
                if self.dims[j] != dim || self.columns[j].is_empty() {
                    continue;
                }
                if let Some(low) = self.reduce_column(j, &pivot_col, &mut scratch) {
                    pivot_col[low] = j;
                    // `low` is a birth; its own column would reduce to zero
                    self.columns[low].clear();
                    pairs.push((low, j));
                }
            }
        }
        pairs.sort_unstable_by_key(|&(_, death)| death);
        pairs
    }

    fn reduce_cohomology(self) -> Vec<(usize, usize)> {
        let m = self.columns.len();
        let mut cob: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (tau, faces) in self.columns.iter().enumerate() {
            for &sigma in faces {
                cob[sigma].push(tau);
            }
        }
        // rows ascend in filtration order, so the pivot is the first entry
        let mut owner = vec![NO_PIVOT; m];
        let mut cleared = vec![false; m];
        let mut pairs = Vec::new();
        let mut scratch = Vec::new();
        for dim in 0..self.max_dim {
            for sigma in (0..m).rev() {
                if self.dims[sigma] != dim || cleared[sigma] {
                    continue;
                }
                let mut col = std::mem::take(&mut cob[sigma]);
                while let Some(&pivot) = col.first() {
                    let other = owner[pivot];
                    if other == NO_PIVOT {
                        break;
                    }
                    add_sorted(&col, &cob[other], &mut scratch);
                    std::mem::swap(&mut col, &mut scratch);
                }
                if let Some(&pivot) = col.first() {
                    owner[pivot] = sigma;
                    cleared[pivot] = true;
                    pairs.push((sigma, pivot));
                }
                cob[sigma] = col;
            }
        }
        pairs.sort_unstable_by_key(|&(_, death)| death);
        pairs
    }

    /// Adds earlier pivot columns into column `j` until its lowest entry is
    /// unclaimed. Returns that entry, or `None` if the column vanishes.
    fn reduce_column(&mut self, j: usize, pivot_col: &[usize], scratch: &mut Vec<usize>) -> Option<usize> {
        let mut col = std::mem::take(&mut self.columns[j]);
        while let Some(&low) = col.last() {
            let other = pivot_col[low];
            if other == NO_PIVOT {
                break;
            }
            add_sorted(&col, &self.columns[other], scratch);
            std::mem::swap(&mut col, scratch);
        }
        let low = col.last().copied();
        self.columns[j] = col;
        low
    }
}

/// `out = a xor b` for sorted index lists.
fn add_sorted(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut k) = (0, 0);
    while i < a.len() && k < b.len() {
        match a[i].cmp(&b[k]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[k]);
                k += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                k += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[k..]);
}
