//! Topological anomaly scoring for intraday multivariate return series.
//!
//! Each sliding window of log-return vectors is treated as a point cloud. Its
//! Vietoris-Rips persistence diagram is turned into a persistence landscape,
//! and the landscape's `L^1` norm forms a time series `Y`. An exponentially
//! weighted mean and variance of `Y` then score every window by
//! `Z_t = (Y_t - EMA_{t-1}) / sqrt(EMVar_{t-1})`.
//!
//! Pipeline stages, bottom up:
//!
//! * [`geometry`] point clouds and distance matrices
//! * [`rips`] Vietoris-Rips filtrations
//! * [`homology`] persistence intervals by `Z/2` column reduction
//! * [`landscape`] exact landscapes and their norms
//! * [`anomaly`] returns, windows, the `Y` series and the `Z` score
//! * [`io`] CSV ingestion, alignment, synthetic fixtures and output writers
//!
//! See the crate's `examples/` directory for one runnable program per stage.

pub mod anomaly;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod homology;
pub mod io;
pub mod landscape;
pub mod rips;

pub use anomaly::{AnomalyRecord, PipelineConfig};
pub use error::{Error, Result};
pub use geometry::{distance_matrix, DistanceMatrix, PointCloud};
pub use homology::{compute_persistence, PersistenceDiagram, PersistenceInterval};
pub use landscape::{build_landscape, landscape_norm, Landscape, Tent};
pub use rips::{build_filtration, Filtration, FilteredSimplex};
