//! Ingest, snapshot files, command-line driver and HTTP API built on
//! [`stancescope_core`].

pub mod api;
pub mod cli;
pub mod config;
pub mod ingest;
pub mod wire;

pub use stancescope_core as core;
