//! Reproducible Monte Carlo studies on top of [`pyor`]: coverage tables for
//! (bias-corrected) credible intervals, posterior density draws, credible
//! bands for the CDF, occupancy asymptotics and type-parameter studies.
//!
//! Replications are the unit of parallelism. Each replication derives its
//! own generator from `(master_seed, law, n, replication)`, results are
//! aggregated in replication order, and floats are rendered in shortest
//! round-trip form, so a given config and seed produce byte-identical CSV
//! whatever the worker count.

pub mod band;
pub mod config;
pub mod coverage;
pub mod density;
mod error;
pub mod occupancy;
pub mod runner;
pub mod seed;
pub mod sigma_study;
pub mod table;
pub mod tools;

pub use config::{ExperimentConfig, GaussianSpec, NamedLaw, ResolvedConfig, SigmaMode};
pub use error::{SimError, SimResult};

/// Toolkit version recorded in output sidecars.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
