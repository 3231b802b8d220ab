//! Persistence diagrams of a square and of a noisy circle, with every
//! reduction strategy giving the same answer.
//!
//!     cargo run --example persistence_diagram

use tdascan::homology::{compute_persistence_with, Reduction};
use tdascan::{build_filtration, compute_persistence, distance_matrix, PointCloud};

fn main() -> tdascan::Result<()> {
    let square = PointCloud::new(vec![
        vec![0.0, 0.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
    ])?;
    let diag = compute_persistence(&build_filtration(&distance_matrix(&square), 2, None)?)?;
    println!("unit square:");
    for i in diag.intervals() {
        println!("  {i}");
    }

    let circle: Vec<Vec<f64>> = (0..16)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / 16.0;
            let wobble = 1.0 + 0.05 * (5.0 * t).sin();
            vec![wobble * t.cos(), wobble * t.sin()]
        })
        .collect();
    let filt = build_filtration(&distance_matrix(&PointCloud::new(circle)?), 2, None)?;
    println!("\nnoisy circle ({} simplices):", filt.len());
    let reference = compute_persistence_with(&filt, Reduction::Standard)?;
    for i in reference.in_dim(1) {
        println!("  {i}  persistence {:.3}", i.persistence());
    }
    for r in [Reduction::Clearing, Reduction::Cohomology] {
        assert_eq!(compute_persistence_with(&filt, r)?, reference);
    }
    println!("standard, clearing and cohomology reductions agree");
    Ok(())
}
