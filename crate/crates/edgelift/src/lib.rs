//! File formats, configuration, reports and the pipeline driver built on
//! [`edgelift_core`].
//!
//! - [`format`]: the `MCWL` volume container, `MVF1` motion fields and a
//!   text dump of prediction matrices.
//! - [`config`]: `key = value` run configuration.
//! - [`pipeline`]: decomposition of a volume with several methods, with a
//!   reconstruction check before anything is reported.
//! - [`report`]: metrics CSV and the method comparison table.

pub mod config;
mod error;
pub mod format;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
