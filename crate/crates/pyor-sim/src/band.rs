//! Simultaneous credible-band coverage for the CDF.

use rayon::prelude::*;

use pyor::{band, cdf_grid, posterior_cdf_row, summarize, BandOptions, PyParams};

use crate::config::{ResolvedConfig, SigmaMode};
use crate::error::{SimError, SimResult};
use crate::runner::draw_dataset;
use crate::seed;
use crate::table::{csv_document, csv_line, fmt};

#[derive(Clone, Debug)]
pub struct BandRow {
    pub law: String,
    pub n: usize,
    pub coverage: f64,
    pub mc_standard_error: f64,
    pub mean_xi: f64,
}

pub const CSV_HEADER: &str = "law,n,coverage,mc_standard_error,mean_xi";

impl BandRow {
    pub fn csv_row(&self) -> String {
        csv_line([
            self.law.clone(),
            self.n.to_string(),
            fmt(self.coverage),
            fmt(self.mc_standard_error),
            fmt(self.mean_xi),
        ])
    }
}

pub fn run_band_coverage(cfg: &ResolvedConfig) -> SimResult<Vec<BandRow>> {
    if cfg.sigma_mode != SigmaMode::Fixed {
        return Err(SimError::Config(
            "band-coverage currently runs with fixed sigma only".into(),
        ));
    }
    let opts = BandOptions { alpha: cfg.band_alpha, ..Default::default() };
    let mut rows = Vec::new();
    for (law_id, (name, law)) in cfg.laws.iter().enumerate() {
        for &n in &cfg.sample_sizes {
            let eps = cfg.epsilon_for(n);
            let recs: Vec<SimResult<(bool, f64)>> = (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let mut rng = seed::rng_for(cfg.master_seed, law_id as u64, n as u64, r as u64);
                    let data = draw_dataset(law, n, &mut rng)?;
                    let summary = summarize(&data);
                    let grid = cdf_grid(&summary, &cfg.g);
                    let f0: Vec<f64> = grid.iter().map(|&t| law.cdf(t)).collect();
                    let params = PyParams::new(cfg.sigma, cfg.m, cfg.g)?;
                    let mut scratch = Vec::new();
                    let mut draws = vec![vec![0.0; grid.len()]; cfg.posterior_draws];
                    for row in draws.iter_mut() {
                        posterior_cdf_row(&params, &summary, &grid, eps, &mut rng, &mut scratch, row)?;
                    }
                    let b = band(&draws, &grid, None, None, &opts)?;
                    Ok((b.covers(&f0), b.xi()))
                })
                .collect();
            let mut covered = 0usize;
            let mut xi_sum = 0.0;
            for rec in recs {
                let (c, xi) = rec?;
                covered += c as usize;
                xi_sum += xi;
            }
            let reps = cfg.replications as f64;
            let p = covered as f64 / reps;
            rows.push(BandRow {
                law: name.clone(),
                n,
                coverage: p,
                mc_standard_error: (p * (1.0 - p) / reps).sqrt(),
                mean_xi: xi_sum / reps,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BandRow]) -> String {
    csv_document(CSV_HEADER, rows.iter().map(BandRow::csv_row))
}
