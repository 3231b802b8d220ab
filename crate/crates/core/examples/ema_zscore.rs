//! The exponentially weighted mean/variance recursion and the Z score on a
//! short hand-written series with one jump.
//!
//!     cargo run --example ema_zscore

use tdascan::anomaly::score_series;
use tdascan::io::{Minute, TimeStyle};

fn main() {
    let ys = [1.0, 1.1, 0.9, 1.0, 1.05, 0.95, 1.0, 4.0, 1.2, 1.0];
    let stamped: Vec<(Minute, f64)> = ys.iter().enumerate().map(|(i, &y)| (Minute(i as i64), y)).collect();
    println!("{:>3} {:>6} {:>8} {:>10} {:>8}", "t", "y", "ema", "emvar", "z");
    for r in score_series(&stamped, 0.1, 0.0, 1) {
        let z = r.z.map_or("-".to_string(), |z| format!("{z:.2}"));
        println!(
            "{:>3} {:>6.2} {:>8.4} {:>10.6} {:>8}",
            TimeStyle::EpochMinutes.format(r.timestamp),
            r.y,
            r.ema,
            r.emvar,
            z
        );
    }
}
