//! Command-line front end for the passage-time experiments.

pub mod commands;
pub mod error;
pub mod output;
pub mod registry;
