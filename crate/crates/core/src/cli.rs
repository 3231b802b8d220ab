//! Command-line front end.
//!
//! Exit codes: `0` success, `1` internal failure, `2` bad input or flags.
//! Log verbosity follows the `TDASCAN_LOG` environment variable
//! (`error`, `warn`, `info`, `debug`, `trace`).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{NaiveDate, NaiveTime};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::anomaly::{
    self, PipelineConfig, DEFAULT_ALPHA, DEFAULT_EPS, DEFAULT_P, DEFAULT_WARMUP, DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, PointCloud};
use crate::homology::{compute_persistence_with, PersistenceDiagram, Reduction};
use crate::io::{self, output, AlignPolicy, AlignedSeries, FormatSpec, InstrumentBars, Minute, TimeStyle};
use crate::landscape::build_landscape_capped;
use crate::rips::{build_filtration, DEFAULT_MAX_DIM};

pub const LOG_ENV: &str = "TDASCAN_LOG";

#[derive(Debug, Parser)]
#[command(name = "tdascan", version, about = "Persistence-landscape crash detection on minute bars")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Persistence diagram of a point cloud or of one window of bars.
    Persistence(DiagramArgs),
    /// Persistence landscape breakpoints of a point cloud or of one window of bars.
    Landscape(LandscapeArgs),
    /// Score every window of a bar series.
    Scan(ScanArgs),
    /// Write a synthetic bar series.
    Synth(SynthArgs),
    /// Repeat a scan over a grid of alpha values.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// One point per row, one coordinate per column.
    Points,
    /// `timestamp,<instrument>...` in a single file.
    Wide,
    /// `timestamp,symbol,close` in a single file.
    Long,
    /// One `timestamp,close` file per instrument.
    Bars,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlignArg {
    Intersection,
    Ffill,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file(s).
    #[arg(required = true)]
    pub input: Vec<PathBuf>,
    /// Timestamp column name.
    #[arg(long, default_value = "timestamp")]
    pub time_column: String,
    /// Close column name (bars and long formats).
    #[arg(long, default_value = "close")]
    pub close_column: String,
    /// Symbol column name (long format).
    #[arg(long, default_value = "symbol")]
    pub symbol_column: String,
    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Timestamp alignment across instruments.
    #[arg(long, value_enum, default_value_t = AlignArg::Intersection)]
    pub align: AlignArg,
    /// Longest forward-filled gap in minutes (with --align ffill).
    #[arg(long, default_value_t = io::DEFAULT_MAX_GAP)]
    pub max_gap: i64,
    /// Keep only bars at or after this time of day (HH:MM).
    #[arg(long)]
    pub session_start: Option<String>,
    /// Keep only bars before this time of day (HH:MM).
    #[arg(long)]
    pub session_end: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ComplexArgs {
    /// Top simplex dimension of the Rips complex.
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
    /// Drop simplices with diameter above this value.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Matrix reduction used for persistence; all give identical diagrams.
    #[arg(long, value_enum, default_value_t = ReductionArg::Cohomology)]
    pub reduction: ReductionArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionArg {
    /// Plain column reduction of the boundary matrix.
    Standard,
    /// Boundary reduction with clearing.
    Clearing,
    /// Coboundary reduction with clearing.
    Cohomology,
}

#[derive(Debug, Clone, Args)]
pub struct DiagramArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Input layout.
    #[arg(long, value_enum, default_value_t = InputFormat::Points)]
    pub format: InputFormat,
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// Window length when the input is bars.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Window end timestamp when the input is bars (default: last window).
    #[arg(long)]
    pub at: Option<String>,
    /// Do not reset windows at day boundaries.
    #[arg(long)]
    pub bridge_days: bool,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub diagram: DiagramArgs,
    /// Homology dimensions feeding the landscape.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub dims: Vec<usize>,
    /// Norm order reported on stderr.
    #[arg(long, default_value_t = DEFAULT_P)]
    pub p: f64,
    /// Truncate essential intervals at this value instead of skipping them.
    #[arg(long)]
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Input layout.
    #[arg(long, value_enum, default_value_t = InputFormat::Wide)]
    pub format: InputFormat,
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// Returns per window.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: usize,
    /// Homology dimensions feeding the landscape.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub dims: Vec<usize>,
    /// Landscape norm order.
    #[arg(long, default_value_t = DEFAULT_P)]
    pub p: f64,
    /// Truncate essential intervals at this value instead of skipping them.
    #[arg(long)]
    pub cap: Option<f64>,
    /// Records per segment before z is reported.
    #[arg(long, default_value_t = DEFAULT_WARMUP)]
    pub warmup: usize,
    /// z is left empty while the previous EMVar is at or below this value.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// Run one continuous scan instead of restarting every day.
    #[arg(long)]
    pub bridge_days: bool,
    /// Worker threads for window computations (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// EMA/EMVar decay.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Also write `timestamp,price,z` rows to this file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Comma-separated alpha values.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "0.05,0.1,0.2")]
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Generator seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub days: usize,
    #[arg(long, default_value_t = 1430)]
    pub minutes_per_day: usize,
    #[arg(long, default_value_t = 3)]
    pub instruments: usize,
    /// Per-minute log-return standard deviation.
    #[arg(long, default_value_t = 3e-4)]
    pub volatility: f64,
    /// Pairwise return correlation.
    #[arg(long, default_value_t = 0.8)]
    pub correlation: f64,
    #[arg(long, default_value_t = 1000.0)]
    pub base_price: f64,
    /// First session date (YYYY-MM-DD).
    #[arg(long, default_value = "2010-05-03")]
    pub start_date: String,
    /// Session open (HH:MM).
    #[arg(long, default_value = "00:00")]
    pub session_open: String,
    /// Row index of the first shocked minute; no shock when absent.
    #[arg(long)]
    pub shock_start: Option<usize>,
    /// Drawdown at the trough, as a fraction.
    #[arg(long, default_value_t = 0.06)]
    pub shock_depth: f64,
    /// Minutes from onset to full rebound.
    #[arg(long, default_value_t = 36)]
    pub shock_duration: usize,
    /// Noise multiplier inside the shock.
    #[arg(long, default_value_t = 10.0)]
    pub shock_vol: f64,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

pub fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Persistence(a) => {
            let diag = diagram_for(a)?;
            with_output(a.out.as_deref(), |w| output::write_diagram(w, &diag))
        }
        Command::Landscape(a) => {
            let dims = dim_set(&a.dims)?;
            if !(a.p >= 1.0) {
                return Err(Error::Config(format!("p must be >= 1, got {}", a.p)));
            }
            let diag = diagram_for(&a.diagram)?;
            let land = build_landscape_capped(&diag, &dims, a.cap);
            log::info!("landscape depth {}, norm {}", land.depth(), land.norm(a.p)?);
            with_output(a.diagram.out.as_deref(), |w| output::write_landscape(w, &land))
        }
        Command::Scan(a) => {
            let cfg = PipelineConfig {
                alpha: a.alpha,
                ..pipeline_config(&a.pipeline)?
            };
            cfg.validate()?;
            let series = load_series(&a.pipeline.input, a.pipeline.format)?;
            let records = anomaly::run_pipeline(&series, &cfg)?;
            log::info!("scored {} windows", records.len());
            if let Some(path) = &a.plot_data {
                with_output(Some(path), |w| output::write_plot_data(w, &series, &records))?;
            }
            with_output(a.pipeline.out.as_deref(), |w| {
                output::write_anomaly(w, &records, series.style())
            })
        }
        Command::Sweep(a) => {
            if a.alpha.is_empty() {
                return Err(Error::Config("--alpha grid is empty".into()));
            }
            let cfg = pipeline_config(&a.pipeline)?;
            let series = load_series(&a.pipeline.input, a.pipeline.format)?;
            let rows = anomaly::alpha_sweep(&series, &cfg, &a.alpha)?;
            with_output(a.pipeline.out.as_deref(), |w| output::write_sweep(w, &rows, series.style()))
        }
        Command::Synth(a) => {
            let spec = synth_spec(a)?;
            let series = io::synth_generate(a.seed, &spec);
            with_output(a.out.as_deref(), |w| output::write_bars(w, &series))
        }
    }
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })
        }
        None => {
            let stdout = std::io::stdout().lock();
            let mut w = BufWriter::new(stdout);
            f(&mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn dim_set(dims: &[usize]) -> Result<BTreeSet<usize>> {
    let set: BTreeSet<usize> = dims.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::Config("--dims must not be empty".into()));
    }
    Ok(set)
}

fn pipeline_config(a: &PipelineArgs) -> Result<PipelineConfig> {
    if a.format == InputFormat::Points {
        return Err(Error::Config("scan and sweep need bar input, not --format points".into()));
    }
    Ok(PipelineConfig {
        window: a.window,
        dims: dim_set(&a.dims)?,
        p: a.p,
        max_dim: a.complex.max_dim,
        threshold: a.complex.threshold,
        inf_cap: a.cap,
        warmup: a.warmup,
        eps: a.eps,
        bridge_days: a.bridge_days,
        threads: a.threads,
        ..PipelineConfig::default()
    })
}

fn parse_time_of_day(raw: &str) -> Result<NaiveTime> {
    NaiveTime::parse_from_str(raw, "%H:%M")
        .map_err(|_| Error::Config(format!("expected HH:MM, got {raw:?}")))
}

fn format_spec(a: &InputArgs) -> Result<FormatSpec> {
    if !a.delimiter.is_ascii() {
        return Err(Error::Config("delimiter must be a single ASCII character".into()));
    }
    Ok(FormatSpec {
        timestamp_column: a.time_column.clone(),
        close_column: a.close_column.clone(),
        symbol_column: a.symbol_column.clone(),
        delimiter: a.delimiter as u8,
    })
}

/// Reads bars in the given layout and aligns them.
pub fn load_series(a: &InputArgs, format: InputFormat) -> Result<AlignedSeries> {
    let spec = format_spec(a)?;
    let single = || -> Result<&PathBuf> {
        match a.input.as_slice() {
            [one] => Ok(one),
            _ => Err(Error::Config(format!("{format:?} format takes exactly one input file"))),
        }
    };
    let (instruments, style): (Vec<InstrumentBars>, TimeStyle) = match format {
        InputFormat::Wide => io::read_wide(single()?, &spec)?,
        InputFormat::Long => io::read_long(single()?, &spec)?,
        InputFormat::Bars => {
            let mut out = Vec::new();
            let mut style = TimeStyle::default();
            for path in &a.input {
                let (bars, s) = io::bars::read_bars_styled(path, &spec)?;
                style = s;
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("inst{}", out.len()));
                out.push(InstrumentBars { name, bars });
            }
            (out, style)
        }
        InputFormat::Points => return Err(Error::Config("point input carries no bars".into())),
    };
    let policy = match a.align {
        AlignArg::Intersection => AlignPolicy::Intersection,
        AlignArg::Ffill => AlignPolicy::ForwardFill { max_gap: a.max_gap },
    };
    let mut series = io::align(&instruments, policy, style)?;
    if a.session_start.is_some() || a.session_end.is_some() {
        let start = a.session_start.as_deref().map(parse_time_of_day).transpose()?;
        let end = a.session_end.as_deref().map(parse_time_of_day).transpose()?;
        let end_of_day = NaiveTime::from_hms_nano_opt(23, 59, 59, 999_999_999).expect("valid time");
        series = series.filter_session(start.unwrap_or(NaiveTime::MIN), end.unwrap_or(end_of_day));
    }
    log::debug!("{} aligned rows across {} instruments", series.len(), series.instruments());
    Ok(series)
}

fn diagram_for(a: &DiagramArgs) -> Result<PersistenceDiagram> {
    let cloud = match a.format {
        InputFormat::Points => {
            let [path] = a.input.input.as_slice() else {
                return Err(Error::Config("points format takes exactly one input file".into()));
            };
            io::read_points(path)?
        }
        fmt => window_cloud(a, fmt)?,
    };
    let reduction = match a.complex.reduction {
        ReductionArg::Standard => Reduction::Standard,
        ReductionArg::Clearing => Reduction::Clearing,
        ReductionArg::Cohomology => Reduction::Cohomology,
    };
    let filt = build_filtration(&distance_matrix(&cloud), a.complex.max_dim, a.complex.threshold)?;
    compute_persistence_with(&filt, reduction)
}

fn window_cloud(a: &DiagramArgs, fmt: InputFormat) -> Result<PointCloud> {
    if a.window < 2 {
        return Err(Error::Config(format!("window must be >= 2, got {}", a.window)));
    }
    let series = load_series(&a.input, fmt)?;
    let at = a
        .at
        .as_deref()
        .map(|raw| io::parse_timestamp(raw).map(|(m, _)| m).map_err(Error::Config))
        .transpose()?;
    let mut found: Option<(Minute, PointCloud)> = None;
    for range in anomaly::segments(&series, a.bridge_days) {
        let seg = series.slice(range);
        let returns = anomaly::log_returns(&seg)?;
        for w in anomaly::sliding_windows(&returns, a.window) {
            if at.map_or(true, |t| t == w.end) {
                found = Some((w.end, w.cloud));
            }
        }
    }
    match found {
        Some((end, cloud)) => {
            log::info!("using window ending at {}", series.style().format(end));
            Ok(cloud)
        }
        None => Err(Error::Config(match a.at {
            Some(ref t) => format!("no complete window ends at {t}"),
            None => "input too short for one window".into(),
        })),
    }
}

fn synth_spec(a: &SynthArgs) -> Result<io::SynthSpec> {
    let start_date = NaiveDate::parse_from_str(&a.start_date, "%Y-%m-%d")
        .map_err(|_| Error::Config(format!("expected YYYY-MM-DD, got {:?}", a.start_date)))?;
    let open = parse_time_of_day(&a.session_open)?;
    let session_start = open.signed_duration_since(NaiveTime::MIN).num_minutes() as u32;
    if a.instruments == 0 || a.minutes_per_day == 0 {
        return Err(Error::Config("instruments and minutes per day must be positive".into()));
    }
    if session_start as usize + a.minutes_per_day > 1440 {
        return Err(Error::Config("session does not fit in one day".into()));
    }
    if !(a.volatility >= 0.0) || !(a.base_price > 0.0) || !(0.0..=1.0).contains(&a.correlation) {
        return Err(Error::Config(
            "need volatility >= 0, base price > 0 and correlation in [0, 1]".into(),
        ));
    }
    let shock = match a.shock_start {
        None => None,
        Some(start) => {
            if !(a.shock_depth >= 0.0 && a.shock_depth < 1.0) || !(a.shock_vol >= 0.0) {
                return Err(Error::Config("shock depth must lie in [0, 1) and shock vol >= 0".into()));
            }
            Some(io::ShockSpec {
                start,
                depth: a.shock_depth,
                duration: a.shock_duration,
                vol_multiplier: a.shock_vol,
            })
        }
    };
    Ok(io::SynthSpec {
        instruments: a.instruments,
        days: a.days,
        minutes_per_day: a.minutes_per_day,
        session_start,
        start_date,
        base_price: a.base_price,
        volatility: a.volatility,
        correlation: a.correlation,
        shock,
    })
}
