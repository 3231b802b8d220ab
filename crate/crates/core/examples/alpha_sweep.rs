//! Sensitivity of the peak score to the EMA decay rate.
//!
//!     cargo run --release --example alpha_sweep

use tdascan::anomaly::alpha_sweep;
use tdascan::io::{synth_generate, ShockSpec, SynthSpec, TimeStyle};
use tdascan::PipelineConfig;

fn main() -> tdascan::Result<()> {
    let spec = SynthSpec {
        minutes_per_day: 600,
        shock: Some(ShockSpec { start: 420, depth: 0.06, duration: 36, vol_multiplier: 10.0 }),
        ..SynthSpec::default()
    };
    let series = synth_generate(4, &spec);
    println!("shock onset {}", TimeStyle::Iso.format(series.timestamps()[420]));
    let alphas = [0.02, 0.05, 0.1, 0.2, 0.4];
    // skip the first half hour of scores, where the variance estimate is still thin
    let cfg = PipelineConfig { warmup: 30, ..PipelineConfig::default() };
    for row in alpha_sweep(&series, &cfg, &alphas)? {
        match (row.max_abs_z, row.argmax) {
            (Some(z), Some(at)) => println!("alpha {:<5} max |Z| {z:9.2} at {}", row.alpha, TimeStyle::Iso.format(at)),
            _ => println!("alpha {:<5} no scored windows", row.alpha),
        }
    }
    Ok(())
}
