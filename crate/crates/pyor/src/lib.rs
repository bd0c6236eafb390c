//! Simulation and inference for the Pitman-Yor process of nonnegative type.
//!
//! A Pitman-Yor process `PY(σ, M, G)` with type `σ ∈ [0, 1)`, concentration
//! `M ≥ 0` and atomless base measure `G` is the random probability measure
//! `P = Σ_i W_i δ_{θ_i}` built by stick-breaking: `W_i = V_i Π_{j<i} (1 − V_j)`
//! with `V_i ~ Beta(1 − σ, M + iσ)` and `θ_i ~ G`.
//!
//! The crate provides, in order of dependency:
//!
//! * [`laws`] — discrete true distributions (finite tables and power laws on
//!   the positive integers) and the Gaussian base measure, with exact
//!   inverse-CDF sampling and closed-form integrals of the test functions in
//!   [`functional`];
//! * [`stats`] — reduction of a sample to its partition statistics (distinct
//!   values in order of appearance, multiplicities, occupancy counts);
//! * [`stick`] — truncated stick-breaking realizations of the prior;
//! * [`posterior`] — exact draws from the Pitman-Yor posterior together with
//!   closed-form posterior moments and their large-sample limits;
//! * [`sigma`] — inference for the type parameter from the exchangeable
//!   partition: likelihood, score, maximum-likelihood estimate and a grid
//!   posterior;
//! * [`credible`] — the plug-in bias term, (bias-corrected) credible
//!   intervals for `Pf`, and simultaneous credible bands for the CDF.
//!
//! All randomness flows through caller-supplied [`rand::Rng`] streams; every
//! operation is deterministic given the stream.

pub mod credible;
mod error;
pub mod functional;
pub mod laws;
pub mod posterior;
pub mod sampling;
pub mod sigma;
pub mod stats;
pub mod stick;

pub use credible::{band, bias, cdf_grid, interval, BandOptions, CredibleBand, CredibleInterval};
pub use error::{Error, Result};
pub use functional::Functional;
pub use laws::{AtomicLaw, GaussianLaw, Law, LawSpec};
pub use posterior::{
    default_epsilon, eval_draw, limit_mean, limit_variance, posterior_cdf_row, posterior_draw,
    posterior_mean_exact, posterior_pf, posterior_variance_exact, P0Decomposition, PosteriorDraw,
};
pub use sigma::{
    ascending_factorial_log, eppf_log, eppf_total_mass, mle_sigma, score, sigma_posterior,
    Boundary, SigmaFit, SigmaPosterior,
};
pub use stats::{summarize, Dataset, PartitionSummary};
pub use stick::{sample_py, sample_py_integral, PyParams, WeightedAtoms};
