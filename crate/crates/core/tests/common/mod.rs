//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's persistence or landscape code; the
//! oracles recompute everything from raw coordinates or tents.

#![allow(dead_code)]

use rand::Rng;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn random_cloud<R: Rng>(rng: &mut R, max_n: usize, max_d: usize) -> Vec<Vec<f64>> {
    let n = rng.gen_range(1..=max_n);
    let d = rng.gen_range(1..=max_d);
    // a coarse grid half of the time, so ties in the filtration get exercised
    let grid = rng.gen_bool(0.5);
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| if grid { rng.gen_range(0..3) as f64 } else { rng.gen_range(-1.0..1.0) })
                .collect()
        })
        .collect()
}

/// A simplex of the full Rips complex: vertex bitmask plus diameter.
#[derive(Clone, Copy, Debug)]
struct Cell {
    mask: u32,
    dim: usize,
    value: f64,
}

fn cells(points: &[Vec<f64>], top_dim: usize) -> Vec<Cell> {
    let n = points.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > top_dim + 1 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut value: f64 = 0.0;
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                value = value.max(euclid(&points[i], &points[j]));
            }
        }
        out.push(Cell { mask, dim: size - 1, value });
    }
    out
}

/// Rank over Z/2 of a set of bit vectors.
fn rank(vectors: impl IntoIterator<Item = u128>) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Kernel basis of the boundary map restricted to `chain` (k-simplices), as
/// bit vectors over the positions in `chain`.
fn cycle_basis(chain: &[Cell], faces: &[Cell]) -> Vec<u128> {
    let boundary = |c: &Cell| -> u128 {
        if c.dim == 0 {
            return 0;
        }
        let mut b = 0u128;
        for (pos, f) in faces.iter().enumerate() {
            if f.mask & c.mask == f.mask && f.dim + 1 == c.dim {
                b |= 1 << pos;
            }
        }
        b
    };
    // eliminate with tracking; rows that reduce to zero give cycles
    let mut rows: Vec<(u128, u128)> = Vec::new();
    let mut cycles = Vec::new();
    for (i, c) in chain.iter().enumerate() {
        let (mut v, mut track) = (boundary(c), 1u128 << i);
        loop {
            let lead = match (v != 0).then(|| 127 - v.leading_zeros()) {
                Some(l) => l,
                None => break,
            };
            match rows.iter().find(|(r, _)| 127 - r.leading_zeros() == lead) {
                Some(&(r, t)) => {
                    v ^= r;
                    track ^= t;
                }
                None => break,
            }
        }
        if v == 0 {
            cycles.push(track);
        } else {
            rows.push((v, track));
        }
    }
    cycles
}

/// Intervals `(dim, birth, death)` of the Rips persistence of `points` in
/// dimensions `0..=max_hom`, from ranks of persistent homology maps.
pub fn oracle_persistence(points: &[Vec<f64>], max_hom: usize) -> Vec<(usize, f64, f64)> {
    let all = cells(points, max_hom + 1);
    let mut values: Vec<f64> = all.iter().map(|c| c.value).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let m = values.len();
    let mut out = Vec::new();
    for k in 0..=max_hom {
        let of_dim = |d: usize| -> Vec<Cell> { all.iter().copied().filter(|c| c.dim == d).collect() };
        let ks = of_dim(k);
        let lower = if k == 0 { Vec::new() } else { of_dim(k - 1) };
        let upper = of_dim(k + 1);
        let bit_of = |c: &Cell| -> u128 { 1 << ks.iter().position(|x| x.mask == c.mask).unwrap() };
        let boundary_in_k = |c: &Cell| -> u128 {
            ks.iter()
                .enumerate()
                .filter(|(_, f)| f.mask & c.mask == f.mask)
                .fold(0, |acc, (pos, _)| acc | 1 << pos)
        };

        // beta[i][j] = rank of H_k(K_i) -> H_k(K_j)
        let mut beta = vec![vec![0i64; m]; m];
        for i in 0..m {
            let chain: Vec<Cell> = ks.iter().copied().filter(|c| c.value <= values[i]).collect();
            let faces: Vec<Cell> = lower.iter().copied().filter(|c| c.value <= values[i]).collect();
            // cycles as vectors over all k-simplices
            let z: Vec<u128> = cycle_basis(&chain, &faces)
                .into_iter()
                .map(|t| {
                    (0..chain.len())
                        .filter(|&p| t >> p & 1 == 1)
                        .fold(0, |acc, p| acc | bit_of(&chain[p]))
                })
                .collect();
            let zdim = z.len();
            for j in i..m {
                let b: Vec<u128> = upper
                    .iter()
                    .filter(|c| c.value <= values[j])
                    .map(boundary_in_k)
                    .collect();
                let bdim = rank(b.iter().copied());
                let sum = rank(z.iter().chain(b.iter()).copied());
                let inter = zdim + bdim - sum;
                beta[i][j] = (zdim - inter) as i64;
            }
        }
        let b = |i: isize, j: usize| -> i64 { if i < 0 { 0 } else { beta[i as usize][j] } };
        for i in 0..m {
            for j in i + 1..m {
                let mu = b(i as isize, j - 1) - b(i as isize - 1, j - 1) - b(i as isize, j) + b(i as isize - 1, j);
                for _ in 0..mu {
                    out.push((k, values[i], values[j]));
                }
            }
            let inf = b(i as isize, m - 1) - b(i as isize - 1, m - 1);
            for _ in 0..inf {
                out.push((k, values[i], f64::INFINITY));
            }
        }
    }
    sort_triples(&mut out);
    out
}

pub fn sort_triples(v: &mut [(usize, f64, f64)]) {
    v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
}

pub fn triples_match(a: &[(usize, f64, f64)], b: &[(usize, f64, f64)], tol: f64) -> bool {
    let close = |x: f64, y: f64| x == y || (x - y).abs() <= tol * x.abs().max(1.0);
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.0 == q.0 && close(p.1, q.1) && close(p.2, q.2))
}

/// The k-th largest tent value at `x` (1-based `k`), by sorting.
pub fn kmax_tents(tents: &[(f64, f64)], k: usize, x: f64) -> f64 {
    let mut vals: Vec<f64> = tents.iter().map(|&(b, d)| (x - b).min(d - x).max(0.0)).collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals.get(k - 1).copied().unwrap_or(0.0)
}

pub fn random_diagram<R: Rng>(rng: &mut R, max_len: usize) -> Vec<(f64, f64)> {
    let n = rng.gen_range(0..=max_len);
    (0..n)
        .map(|_| {
            let b = rng.gen_range(0.0..2.0);
            (b, b + rng.gen_range(1e-3..1.5))
        })
        .collect()
}

/// EMA, EMVar and Z by a direct loop, with `None` for the first Z.
pub fn reference_scores(ys: &[f64], alpha: f64) -> Vec<(f64, f64, Option<f64>)> {
    let mut out = Vec::with_capacity(ys.len());
    let (mut ema, mut var) = (0.0f64, 0.0f64);
    for (i, &y) in ys.iter().enumerate() {
        if i == 0 {
            ema = y;
            var = 0.0;
            out.push((ema, var, None));
            continue;
        }
        let z = if var > 0.0 { Some((y - ema) / var.sqrt()) } else { None };
        let d = y - ema;
        ema += alpha * d;
        var = (1.0 - alpha) * (var + alpha * d * d);
        out.push((ema, var, z));
    }
    out
}
