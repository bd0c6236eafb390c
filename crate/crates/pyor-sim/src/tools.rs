//! One-shot CLI helpers: fitting σ to a dataset file, sampling the prior,
//! and dumping posterior functional draws for a dataset.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pyor::{
    mle_sigma, sample_py, sigma_posterior, summarize, Boundary, Dataset, PyParams,
};

use crate::config::ResolvedConfig;
use crate::error::SimResult;
use crate::runner::{posterior_pf_draws, SigmaState};
use crate::seed;
use crate::table::{csv_document, csv_line, fmt};

/// JSON payload of `fit-sigma`.
#[derive(Debug, Serialize)]
pub struct SigmaFitReport {
    pub sigma_hat: f64,
    pub boundary: &'static str,
    pub score_at_hat: f64,
    pub posterior_mean: f64,
    pub posterior_q05: f64,
    pub posterior_q95: f64,
}

pub fn fit_sigma_file(path: &Path, m: f64, grid_size: usize) -> SimResult<SigmaFitReport> {
    let data = Dataset::from_csv_path(path)?;
    let summary = summarize(&data);
    let fit = mle_sigma(&summary, m);
    let post = sigma_posterior(&summary, m, |_| 1.0, grid_size)?;
    Ok(SigmaFitReport {
        sigma_hat: fit.sigma_hat,
        boundary: match fit.boundary {
            Boundary::Lower => "lower",
            Boundary::Interior => "interior",
            Boundary::Upper => "upper",
        },
        score_at_hat: fit.score_at_hat,
        posterior_mean: post.mean(),
        posterior_q05: post.quantile(0.05),
        posterior_q95: post.quantile(0.95),
    })
}

/// `sample-prior`: draws `replications` prior realizations and lists them in
/// long form (draw, atom, weight).
pub fn sample_prior_csv(cfg: &ResolvedConfig) -> SimResult<String> {
    let params = PyParams::new(cfg.sigma, cfg.m, cfg.g)?;
    let eps = cfg.epsilon.unwrap_or(1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed::mix64(cfg.master_seed));
    let mut rows = Vec::new();
    for draw in 0..cfg.replications {
        let measure = sample_py(&params, eps, &mut rng)?;
        for (&atom, &weight) in measure.atoms().iter().zip(measure.weights()) {
            rows.push(csv_line([draw.to_string(), fmt(atom), fmt(weight)]));
        }
    }
    Ok(csv_document("draw,atom,weight", rows))
}

/// `posterior-draws`: posterior functional draws for a dataset file.
pub fn posterior_draws_csv(cfg: &ResolvedConfig, path: &Path) -> SimResult<String> {
    let data = Dataset::from_csv_path(path)?;
    let summary = summarize(&data);
    let state = SigmaState::for_replication(cfg, &summary)?;
    let eps = cfg.epsilon_for(data.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed::mix64(cfg.master_seed));
    let mut pf = Vec::with_capacity(cfg.posterior_draws);
    posterior_pf_draws(cfg, &summary, &state, eps, &mut rng, &mut pf)?;
    let rows = pf
        .iter()
        .enumerate()
        .map(|(i, &v)| csv_line([i.to_string(), fmt(v)]));
    Ok(csv_document("draw,pf", rows))
}
