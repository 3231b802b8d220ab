//! Landscape levels of overlapping intervals and their L^p norms.
//!
//!     cargo run --example landscape_norms

use std::collections::BTreeSet;

use tdascan::homology::PersistenceInterval;
use tdascan::{build_landscape, landscape_norm, PersistenceDiagram};

fn main() -> tdascan::Result<()> {
    let diag = PersistenceDiagram::new(
        [(0.0, 2.0), (1.0, 3.0), (0.5, 1.5), (4.0, 5.0)]
            .into_iter()
            .map(|(birth, death)| PersistenceInterval { dim: 1, birth, death })
            .collect(),
    );
    let land = build_landscape(&diag, &BTreeSet::from([1]));
    for (k, level) in land.levels().iter().enumerate() {
        let pts: Vec<String> = level.breakpoints().iter().map(|(x, y)| format!("({x}, {y})")).collect();
        println!("lambda_{}: {}", k + 1, pts.join(" "));
    }
    println!("lambda_1(1.25) = {}", land.eval(1, 1.25));
    println!("lambda_2(1.25) = {}", land.eval(2, 1.25));

    // the L^1 norm is the total tent area, however the tents are spread over levels
    let area: f64 = diag.intervals().iter().map(|i| i.persistence().powi(2) / 4.0).sum();
    for p in [1.0, 2.0, 3.5] {
        println!("||lambda||_{p} = {:.6}", landscape_norm(&land, p)?);
    }
    println!("sum of (d - b)^2 / 4 = {area:.6}");
    Ok(())
}
