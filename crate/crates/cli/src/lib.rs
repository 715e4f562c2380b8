//! Standard-library companion to `uemgft-core`: graph and station file
//! formats, configuration, the experiment runner and CSV outputs.

pub mod config;
pub mod csvout;
pub mod edgelist;
pub mod error;
pub mod runner;
pub mod station;

pub use error::{Error, Result};
