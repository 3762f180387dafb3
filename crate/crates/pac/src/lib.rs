//! File formats and command-line front end for `pac-core`.

pub mod cli;
pub mod io;

pub use cli::run;
