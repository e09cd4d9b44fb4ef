//! File formats and the command-line front end for `logiclearn-core`.

mod app;
pub mod config;
pub mod dataset;
pub mod error;
pub mod model;
pub mod pla;
pub mod schema_text;

pub use app::run;
pub use error::{CliError, Result};
