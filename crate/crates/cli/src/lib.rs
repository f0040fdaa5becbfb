//! Experiment driver for the TWT scheduling simulator.
//!
//! Parses flat configuration files, runs single simulations and parameter
//! sweeps, checks the greedy scheduler against the exhaustive oracle, and
//! writes fixed-schema CSV.

pub mod app;
pub mod check;
pub mod config;
pub mod error;
pub mod sweep;

pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_LEMMA1: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
