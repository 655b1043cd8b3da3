//! File formats, threads and the command line for the `lowcarb_core`
//! optimizer.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod desk;
pub mod error;
pub mod exec;
pub mod manifest;
pub mod monitor;
pub mod mps;
pub mod output;
pub mod scenarios;
