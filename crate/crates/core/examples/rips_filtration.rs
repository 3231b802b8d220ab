//! Distance matrix and Vietoris-Rips filtration of a small planar cloud.
//!
//!     cargo run --example rips_filtration

use tdascan::{build_filtration, distance_matrix, PointCloud};

fn main() -> tdascan::Result<()> {
    let cloud = PointCloud::new(vec![
        vec![0.0, 0.0],
        vec![3.0, 0.0],
        vec![3.0, 4.0],
        vec![0.0, 4.0],
    ])?;
    let dm = distance_matrix(&cloud);
    println!("distances:");
    for i in 0..dm.len() {
        let row: Vec<String> = dm.row(i).iter().map(|d| format!("{d:5.2}")).collect();
        println!("  {}", row.join(" "));
    }

    let filt = build_filtration(&dm, 2, None)?;
    println!("\n{} simplices up to dimension {}:", filt.len(), filt.max_dim());
    for s in filt.simplices() {
        println!("  {:<10} {:.3}", format!("{:?}", s.vertices), s.value);
    }

    // a diameter threshold keeps only the short edges and what they span
    let cut = build_filtration(&dm, 2, Some(4.0))?;
    println!("\nwith threshold 4.0: {} simplices", cut.len());
    Ok(())
}
