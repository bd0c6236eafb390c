//! Consistency study for the type parameter: per (law, n), the spread of
//! the maximum-likelihood estimate and of the grid-posterior quantiles.

use rayon::prelude::*;

use pyor::{mle_sigma, sigma_posterior, summarize};

use crate::config::ResolvedConfig;
use crate::error::SimResult;
use crate::runner::draw_dataset;
use crate::seed;
use crate::table::{csv_document, csv_line, fmt};

#[derive(Clone, Debug)]
pub struct SigmaStudyRow {
    pub law: String,
    pub n: usize,
    pub mean_sigma_hat: f64,
    pub sd_sigma_hat: f64,
    pub mean_post_mean: f64,
    pub mean_q05: f64,
    pub mean_q50: f64,
    pub mean_q95: f64,
}

pub const CSV_HEADER: &str =
    "law,n,mean_sigma_hat,sd_sigma_hat,mean_post_mean,mean_q05,mean_q50,mean_q95";

impl SigmaStudyRow {
    pub fn csv_row(&self) -> String {
        csv_line([
            self.law.clone(),
            self.n.to_string(),
            fmt(self.mean_sigma_hat),
            fmt(self.sd_sigma_hat),
            fmt(self.mean_post_mean),
            fmt(self.mean_q05),
            fmt(self.mean_q50),
            fmt(self.mean_q95),
        ])
    }
}

struct Rep {
    sigma_hat: f64,
    post_mean: f64,
    q05: f64,
    q50: f64,
    q95: f64,
}

pub fn run_sigma_study(cfg: &ResolvedConfig) -> SimResult<Vec<SigmaStudyRow>> {
    let mut rows = Vec::new();
    for (law_id, (name, law)) in cfg.laws.iter().enumerate() {
        for &n in &cfg.sample_sizes {
            let recs: Vec<SimResult<Rep>> = (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let mut rng = seed::rng_for(cfg.master_seed, law_id as u64, n as u64, r as u64);
                    let data = draw_dataset(law, n, &mut rng)?;
                    let summary = summarize(&data);
                    let fit = mle_sigma(&summary, cfg.m);
                    let post = sigma_posterior(&summary, cfg.m, |_| 1.0, cfg.sigma_grid_size)?;
                    Ok(Rep {
                        sigma_hat: fit.sigma_hat,
                        post_mean: post.mean(),
                        q05: post.quantile(0.05),
                        q50: post.quantile(0.5),
                        q95: post.quantile(0.95),
                    })
                })
                .collect();
            let reps = cfg.replications as f64;
            let mut hats = Vec::with_capacity(cfg.replications);
            let (mut pm, mut q05, mut q50, mut q95) = (0.0, 0.0, 0.0, 0.0);
            for rec in recs {
                let rec = rec?;
                hats.push(rec.sigma_hat);
                pm += rec.post_mean;
                q05 += rec.q05;
                q50 += rec.q50;
                q95 += rec.q95;
            }
            let mean_hat = hats.iter().sum::<f64>() / reps;
            let sd_hat = if hats.len() > 1 {
                (hats.iter().map(|&x| (x - mean_hat) * (x - mean_hat)).sum::<f64>()
                    / (reps - 1.0))
                    .sqrt()
            } else {
                0.0
            };
            rows.push(SigmaStudyRow {
                law: name.clone(),
                n,
                mean_sigma_hat: mean_hat,
                sd_sigma_hat: sd_hat,
                mean_post_mean: pm / reps,
                mean_q05: q05 / reps,
                mean_q50: q50 / reps,
                mean_q95: q95 / reps,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[SigmaStudyRow]) -> String {
    csv_document(CSV_HEADER, rows.iter().map(SigmaStudyRow::csv_row))
}
