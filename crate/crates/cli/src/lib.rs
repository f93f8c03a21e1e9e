//! File formats, run reports, SVG charts and the `skewjs` command line on top
//! of `skewjs-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod histogram;
pub mod pgm;
pub mod report;
pub mod svg;

pub use error::{CliError, Result};
pub use histogram::{Format, HistogramFile};
pub use pgm::PgmImage;
pub use report::RunReport;
