//! Scans a multi-day synthetic series with one injected crash-and-rebound and
//! reports where |Z| peaks for several decay rates.
//!
//!     cargo run --release --example synthetic_flash_crash -- [seed] [days]
//!
//! The shock starts at 14:10 on the last day-but-one (or the only day), drops
//! 6% and recovers over 36 minutes with ten times the usual noise.

use tdascan::anomaly::{max_abs_z, score_series, segment_norms};
use tdascan::io::{synth_generate, ShockSpec, SynthSpec, TimeStyle};
use tdascan::PipelineConfig;

fn main() -> tdascan::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2010);
    let days: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2).max(1);

    let minutes = 1430;
    let start = days.saturating_sub(2) * minutes + 850;
    let shock = ShockSpec { start, depth: 0.06, duration: 36, vol_multiplier: 10.0 };
    let spec = SynthSpec { days, minutes_per_day: minutes, shock: Some(shock), ..SynthSpec::default() };
    let series = synth_generate(seed, &spec);
    let onset = series.timestamps()[start];
    println!("{} bars, shock onset {}", series.len(), TimeStyle::Iso.format(onset));

    let cfg = PipelineConfig::default();
    let ys = segment_norms(&series, &cfg)?;
    for alpha in [0.05, 0.1, 0.2] {
        let recs: Vec<_> = ys.iter().flat_map(|seg| score_series(seg, alpha, cfg.eps, cfg.warmup)).collect();
        let Some((peak, at)) = max_abs_z(&recs) else { continue };
        let quiet_end = onset.0 + (shock.duration + cfg.window) as i64;
        let mut quiet: Vec<f64> = recs
            .iter()
            .filter(|r| r.timestamp.0 < onset.0 - 5 || r.timestamp.0 > quiet_end)
            .filter_map(|r| r.z.map(f64::abs))
            .collect();
        quiet.sort_by(f64::total_cmp);
        let p99 = quiet[(quiet.len() * 99).div_ceil(100) - 1];
        println!(
            "alpha {alpha:<4}  max |Z| {peak:8.1} at {} ({:+} min)  p99 elsewhere {p99:5.2}  ratio {:6.1}",
            TimeStyle::Iso.format(at),
            at.0 - onset.0,
            peak / p99
        );
    }
    Ok(())
}
