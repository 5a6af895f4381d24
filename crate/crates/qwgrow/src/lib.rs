//! IO, file formats, ensemble experiments and the command line for
//! [`qwgrow_core`].
//!
//! * [`formats`]: edge-list text and GraphML.
//! * [`trace`]: the growth-trace JSON document.
//! * [`report`]: CSV rows for metrics and JSON recurrence reports.
//! * [`config`]: the `key = value` experiment configuration.
//! * [`experiment`]: parallel, reproducible tau sweeps.
//! * [`cli`]: the `qwgrow` binary.

pub mod cli;
pub mod config;
mod error;
pub mod experiment;
pub mod formats;
pub mod report;
pub mod trace;

pub use error::{Error, ParseError, Result};

/// Library version recorded in every output directory.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
