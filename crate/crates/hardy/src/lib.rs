//! Command-line driver and file formats for `hardy-core`, plus a rayon
//! executor.
//!
//! The worker count comes from the `HARDY_THREADS` environment variable and
//! defaults to the number of logical cores. It never changes any result.

pub mod cli;
pub mod config;
pub mod exec;
pub mod output;

pub use exec::{Rayon, THREADS_ENV};
