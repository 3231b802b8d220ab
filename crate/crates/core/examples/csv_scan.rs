//! Full file-based workflow: write synthetic bars as a wide CSV, read them
//! back, scan, and write the score table and a plotting file.
//!
//!     cargo run --release --example csv_scan -- [output-dir]

use std::fs::File;
use std::path::PathBuf;

use tdascan::anomaly::run_pipeline;
use tdascan::io::output::{write_bars, write_plot_data};
use tdascan::io::{align, read_wide, synth_generate, write_anomaly, AlignPolicy, FormatSpec, ShockSpec, SynthSpec};
use tdascan::PipelineConfig;

fn main() -> tdascan::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let io_err = |path: &PathBuf| {
        let path = path.clone();
        move |source| tdascan::Error::Io { path, source }
    };

    let spec = SynthSpec {
        minutes_per_day: 400,
        shock: Some(ShockSpec { start: 250, depth: 0.06, duration: 36, vol_multiplier: 10.0 }),
        ..SynthSpec::default()
    };
    let bars_path = dir.join("tdascan_bars.csv");
    write_bars(File::create(&bars_path).map_err(io_err(&bars_path))?, &synth_generate(1, &spec))?;

    let (instruments, style) = read_wide(&bars_path, &FormatSpec::default())?;
    let series = align(&instruments, AlignPolicy::Intersection, style)?;
    println!("read {} bars for {:?}", series.len(), series.names());

    let records = run_pipeline(&series, &PipelineConfig::default())?;
    let scores_path = dir.join("tdascan_scores.csv");
    write_anomaly(File::create(&scores_path).map_err(io_err(&scores_path))?, &records, series.style())?;
    let plot_path = dir.join("tdascan_plot.csv");
    write_plot_data(File::create(&plot_path).map_err(io_err(&plot_path))?, &series, &records)?;

    let top = records
        .iter()
        .filter(|r| r.z.is_some())
        .max_by(|a, b| a.z.unwrap().abs().total_cmp(&b.z.unwrap().abs()))
        .expect("some window is scored");
    println!("{} windows scored, largest |Z| {:.1} at {}", records.len(), top.z.unwrap().abs(), series.style().format(top.timestamp));
    println!("wrote {}, {} and {}", bars_path.display(), scores_path.display(), plot_path.display());
    Ok(())
}
