//! Shared per-replication machinery.

use pyor::{
    bias, interval, mle_sigma, posterior_pf, sigma_posterior, summarize, Boundary, Dataset,
    Functional, Law, PartitionSummary, PyParams, SigmaPosterior,
};
use rand_chacha::ChaCha8Rng;

use crate::config::{ResolvedConfig, SigmaMode};
use crate::error::{SimError, SimResult};
use crate::seed;

/// Draws a dataset of size `n` from `law` on the replication's own stream.
pub fn draw_dataset(law: &Law, n: usize, rng: &mut ChaCha8Rng) -> SimResult<Dataset> {
    let values: Vec<f64> = (0..n).map(|_| law.sample(rng)).collect();
    Dataset::new(values).map_err(SimError::Numeric)
}

/// σ handling for one replication: the value entering the bias correction
/// and a per-draw supplier of the σ used by the posterior sampler.
pub enum SigmaState {
    Fixed(f64),
    Estimated(f64),
    Posterior(SigmaPosterior),
}

impl SigmaState {
    pub fn for_replication(
        cfg: &ResolvedConfig,
        summary: &PartitionSummary,
    ) -> SimResult<SigmaState> {
        match cfg.sigma_mode {
            SigmaMode::Fixed => Ok(SigmaState::Fixed(cfg.sigma)),
            SigmaMode::EmpiricalBayes => {
                let fit = mle_sigma(summary, cfg.m);
                if fit.boundary == Boundary::Upper {
                    return Err(SimError::Numeric(pyor::Error::Domain(
                        "empirical-Bayes estimate hit sigma = 1 (all observations distinct); \
                         the plug-in posterior is undefined there"
                            .into(),
                    )));
                }
                Ok(SigmaState::Estimated(fit.sigma_hat))
            }
            SigmaMode::FullBayes => {
                let post = sigma_posterior(summary, cfg.m, |_| 1.0, cfg.sigma_grid_size)?;
                Ok(SigmaState::Posterior(post))
            }
        }
    }

    /// σ for the next posterior draw (full Bayes consumes randomness).
    pub fn next_sigma(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            SigmaState::Fixed(s) | SigmaState::Estimated(s) => *s,
            SigmaState::Posterior(post) => post.sample(rng),
        }
    }

    /// σ entering the bias term: the fixed value, the estimate, or the
    /// posterior mean.
    pub fn bias_sigma(&self) -> f64 {
        match self {
            SigmaState::Fixed(s) | SigmaState::Estimated(s) => *s,
            SigmaState::Posterior(post) => post.mean(),
        }
    }
}

/// Fills `pf` with posterior functional draws for one replication.
pub fn posterior_pf_draws(
    cfg: &ResolvedConfig,
    summary: &PartitionSummary,
    state: &SigmaState,
    eps: f64,
    rng: &mut ChaCha8Rng,
    pf: &mut Vec<f64>,
) -> SimResult<()> {
    pf.clear();
    let mut scratch = Vec::new();
    match state {
        SigmaState::Fixed(s) | SigmaState::Estimated(s) => {
            let params = PyParams::new(*s, cfg.m, cfg.g)?;
            for _ in 0..cfg.posterior_draws {
                pf.push(posterior_pf(&params, summary, &cfg.f, eps, rng, &mut scratch)?);
            }
        }
        SigmaState::Posterior(post) => {
            for _ in 0..cfg.posterior_draws {
                let s = post.sample(rng);
                let params = PyParams::new(s, cfg.m, cfg.g)?;
                pf.push(posterior_pf(&params, summary, &cfg.f, eps, rng, &mut scratch)?);
            }
        }
    }
    Ok(())
}

/// Outcome of one coverage replication.
pub struct CoverageRep {
    pub covered_uncorrected: bool,
    pub covered_corrected: bool,
    pub bias: f64,
    pub kn: usize,
}

pub fn coverage_replication(
    cfg: &ResolvedConfig,
    law: &Law,
    law_id: u64,
    n: usize,
    rep: u64,
    p0f: f64,
) -> SimResult<CoverageRep> {
    let mut rng = seed::rng_for(cfg.master_seed, law_id, n as u64, rep);
    let data = draw_dataset(law, n, &mut rng)?;
    let summary = summarize(&data);
    let state = SigmaState::for_replication(cfg, &summary)?;
    let eps = cfg.epsilon_for(n);
    let mut pf = Vec::with_capacity(cfg.posterior_draws);
    posterior_pf_draws(cfg, &summary, &state, eps, &mut rng, &mut pf)?;
    let b = bias(state.bias_sigma(), &summary, &cfg.g, &cfg.f);
    let (alpha, beta) = cfg.level;
    let unc = interval(&pf, alpha, beta, b, false)?;
    let cor = interval(&pf, alpha, beta, b, true)?;
    Ok(CoverageRep {
        covered_uncorrected: unc.contains(p0f),
        covered_corrected: cor.contains(p0f),
        bias: b,
        kn: summary.k(),
    })
}

/// Chunked deterministic parallel posterior functional draws for a fixed
/// summary: chunk `c` runs on seed `mix(seed_base, c)`, so the draw vector
/// is independent of worker count and scheduling.
pub fn pf_draws_parallel(
    params: &PyParams,
    summary: &PartitionSummary,
    f: &Functional,
    eps: f64,
    n_draws: usize,
    seed_base: u64,
    chunk: usize,
) -> SimResult<Vec<f64>> {
    use rayon::prelude::*;
    let chunks: Vec<(usize, usize)> = (0..n_draws)
        .step_by(chunk)
        .map(|start| (start, chunk.min(n_draws - start)))
        .collect();
    let blocks: Vec<SimResult<Vec<f64>>> = chunks
        .par_iter()
        .enumerate()
        .map(|(c, &(_, len))| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed::mix64(seed_base ^ (c as u64).wrapping_mul(0x9e37)));
            let mut scratch = Vec::new();
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                out.push(posterior_pf(params, summary, f, eps, &mut rng, &mut scratch)?);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::with_capacity(n_draws);
    for block in blocks {
        all.extend(block?);
    }
    Ok(all)
}

use rand::SeedableRng;
