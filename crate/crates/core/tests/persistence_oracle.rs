mod common;

use common::{euclid, oracle_persistence, random_cloud, sort_triples, triples_match};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdascan::homology::{compute_persistence_with, Reduction};
use tdascan::{build_filtration, compute_persistence, distance_matrix, PersistenceDiagram, PointCloud};

fn diagram(points: &[Vec<f64>], max_dim: usize) -> PersistenceDiagram {
    let dm = distance_matrix(&PointCloud::new(points.to_vec()).unwrap());
    compute_persistence(&build_filtration(&dm, max_dim, None).unwrap()).unwrap()
}

fn triples(d: &PersistenceDiagram, max_hom: usize) -> Vec<(usize, f64, f64)> {
    let mut v: Vec<_> = d
        .intervals()
        .iter()
        .filter(|i| i.dim <= max_hom)
        .map(|i| (i.dim, i.birth, i.death))
        .collect();
    sort_triples(&mut v);
    v
}

#[test]
fn matches_rank_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..60 {
        let pts = random_cloud(&mut rng, 7, 3);
        let got = triples(&diagram(&pts, 2), 1);
        let want = oracle_persistence(&pts, 1);
        assert!(triples_match(&got, &want, 1e-12), "case {case}: {pts:?}\n got {got:?}\nwant {want:?}");
    }
}

#[test]
fn every_reduction_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let pts = random_cloud(&mut rng, 7, 3);
        let dm = distance_matrix(&PointCloud::new(pts.clone()).unwrap());
        let filt = build_filtration(&dm, 2, None).unwrap();
        let want = oracle_persistence(&pts, 1);
        for r in [Reduction::Standard, Reduction::Clearing, Reduction::Cohomology] {
            let got = triples(&compute_persistence_with(&filt, r).unwrap(), 1);
            assert!(triples_match(&got, &want, 1e-12), "{r:?}");
        }
    }
}

#[test]
fn euler_characteristic_at_every_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let pts = random_cloud(&mut rng, 8, 3);
        let n = pts.len();
        let dm = distance_matrix(&PointCloud::new(pts.clone()).unwrap());
        // full complex, so the diagram covers every dimension
        let filt = build_filtration(&dm, n - 1, None).unwrap();
        let diag = compute_persistence(&filt).unwrap();
        for s in filt.simplices() {
            let eps = s.value;
            let chi: i64 = filt
                .simplices()
                .iter()
                .filter(|t| t.value <= eps)
                .map(|t| if t.dim() % 2 == 0 { 1 } else { -1 })
                .sum();
            let from_betti: i64 = diag
                .intervals()
                .iter()
                .filter(|i| i.birth <= eps && eps < i.death)
                .map(|i| if i.dim % 2 == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(chi, from_betti, "at {eps} for {pts:?}");
        }
    }
}

#[test]
fn small_perturbations_move_endpoints_little() {
    let eta = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let fixtures: Vec<Vec<Vec<f64>>> = vec![
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        (0..10)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 10.0;
                vec![t.cos(), t.sin(), 0.0]
            })
            .collect(),
        (0..8).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect(),
    ];
    for pts in fixtures {
        let moved: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let dir: Vec<f64> = p.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
                let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                p.iter().zip(&dir).map(|(x, d)| x + eta * d / len).collect()
            })
            .collect();
        assert!(pts.iter().zip(&moved).all(|(a, b)| euclid(a, b) <= eta * (1.0 + 1e-9)));
        let a = triples(&diagram(&pts, 2), 1);
        let b = triples(&diagram(&moved, 2), 1);
        // fixtures are generic enough that no interval is born or dies near the diagonal
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.0, y.0);
            assert!((x.1 - y.1).abs() <= 2.0 * eta + 1e-12);
            if x.2.is_finite() {
                assert!((x.2 - y.2).abs() <= 2.0 * eta + 1e-12);
            } else {
                assert_eq!(y.2, f64::INFINITY);
            }
        }
    }
}

#[test]
fn point_order_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..40 {
        let pts = random_cloud(&mut rng, 9, 3);
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(triples(&diagram(&pts, 2), 1), triples(&diagram(&shuffled, 2), 1));
    }
}
