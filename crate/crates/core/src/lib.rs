//! Time-window spatial activity graphs for field sports.
//!
//! GPS-derived player actions are snapped to a square grid over the pitch,
//! grouped into rolling time windows, and turned into one directed graph per
//! window whose nodes are cells and whose edges aggregate movements between
//! cells. Each window graph is then described (density, degree, clustering,
//! path length), ranked by betweenness, and partitioned with Louvain.
//!
//! ```no_run
//! use pitchgraph::config::PipelineConfig;
//! use pitchgraph::pipeline;
//!
//! let config = PipelineConfig {
//!     input: Some("match.csv".into()),
//!     ..PipelineConfig::default()
//! };
//! pipeline::run(&config).unwrap();
//! ```

pub mod analytics;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod ingest;
pub mod pipeline;
pub mod render;
pub mod syngen;
pub mod twg;

pub use error::{Error, Result};
