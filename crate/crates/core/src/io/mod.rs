//! Reading bars, aligning instruments, generating fixtures and writing results.

pub mod align;
pub mod bars;
pub mod output;
pub mod points;
pub mod synth;
pub mod time;

pub use align::{align, AlignPolicy, AlignedSeries, DEFAULT_MAX_GAP};
pub use bars::{read_bars, read_long, read_wide, BarRecord, FormatSpec, InstrumentBars};
pub use points::read_points;
pub use output::{fmt_num, read_anomaly, write_anomaly, write_diagram, write_landscape};
pub use synth::{synth_generate, ShockSpec, SynthSpec};
pub use time::{parse_timestamp, Minute, TimeStyle};
