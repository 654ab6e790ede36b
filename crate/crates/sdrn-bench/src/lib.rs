//! Benchmark harness for the `sdrn` clustering library.
//!
//! The pieces, in pipeline order:
//!
//! - [`datasets`] — the six built-in UCI datasets and their column rules;
//! - [`fetch`] — checksum-verified downloads into a local cache;
//! - [`loader`] — delimited files to labeled point sets, never normalized;
//! - [`config`] — experiment settings (defaults < TOML file < CLI flags);
//! - [`runner`] — repeated shuffled trials, reproducible from the seed;
//! - [`sweeps`] — vigilance and scale-factor grids built on the runner;
//! - [`report`] — JSON reports, summary tables, plot series, SVG charts.
//!
//! Everything an experiment reports is a deterministic function of its
//! configuration and seed; wall-clock timings are kept in a separate file
//! so that holds byte for byte.

pub mod config;
pub mod datasets;
pub mod error;
pub mod fetch;
pub mod loader;
pub mod report;
pub mod runner;
pub mod sweeps;

pub use config::{Algo, ExperimentConfig};
pub use error::{BenchError, Result};
