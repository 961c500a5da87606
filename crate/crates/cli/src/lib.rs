//! File formats and the command line front end for `fastimd`.
//!
//! * [`series_csv`]: time series CSV input (generic and Yahoo daily layouts)
//!   and mode table output.
//! * [`pnm`]: PGM/PPM input, PGM output.
//! * [`svg`]: static line plots.
//! * [`cli`]: the `fastimd` command.

pub mod cli;
mod error;
pub mod pnm;
pub mod series_csv;
pub mod svg;
mod write;

pub use error::{FormatError, Result};
pub use write::write_atomic;
