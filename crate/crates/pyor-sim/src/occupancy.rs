//! Occupancy asymptotics: growth of the number of distinct values against
//! `√n` and against the atom-counting function `α₀(n)`, plus the mass the
//! distinct-value measure leaves on the configured functional.

use rayon::prelude::*;

use pyor::summarize;

use crate::config::ResolvedConfig;
use crate::error::{SimError, SimResult};
use crate::runner::draw_dataset;
use crate::seed;
use crate::table::{csv_document, csv_line, fmt};

#[derive(Clone, Debug)]
pub struct OccupancyRow {
    pub law: String,
    pub n: usize,
    pub mean_kn: f64,
    pub sd_kn: f64,
    pub mean_kn_over_sqrt_n: f64,
    pub sd_kn_over_sqrt_n: f64,
    pub mean_kn_over_alpha0: f64,
    pub sd_kn_over_alpha0: f64,
    pub mean_ptilde_f: f64,
    pub sd_ptilde_f: f64,
}

pub const CSV_HEADER: &str = "law,n,mean_kn,sd_kn,mean_kn_over_sqrt_n,sd_kn_over_sqrt_n,\
mean_kn_over_alpha0,sd_kn_over_alpha0,mean_ptilde_f,sd_ptilde_f";

impl OccupancyRow {
    pub fn csv_row(&self) -> String {
        csv_line([
            self.law.clone(),
            self.n.to_string(),
            fmt(self.mean_kn),
            fmt(self.sd_kn),
            fmt(self.mean_kn_over_sqrt_n),
            fmt(self.sd_kn_over_sqrt_n),
            fmt(self.mean_kn_over_alpha0),
            fmt(self.sd_kn_over_alpha0),
            fmt(self.mean_ptilde_f),
            fmt(self.sd_ptilde_f),
        ])
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|&x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn run_occupancy(cfg: &ResolvedConfig) -> SimResult<Vec<OccupancyRow>> {
    let mut rows = Vec::new();
    for (law_id, (name, law)) in cfg.laws.iter().enumerate() {
        let atomic = law.as_atomic().ok_or_else(|| {
            SimError::Config(format!("occupancy needs a discrete law; {name} is not"))
        })?;
        for &n in &cfg.sample_sizes {
            let recs: Vec<SimResult<(usize, f64)>> = (0..cfg.replications)
                .into_par_iter()
                .map(|r| {
                    let mut rng = seed::rng_for(cfg.master_seed, law_id as u64, n as u64, r as u64);
                    let data = draw_dataset(law, n, &mut rng)?;
                    let summary = summarize(&data);
                    Ok((summary.k(), summary.ptilde(&cfg.f)))
                })
                .collect();
            let mut kns = Vec::with_capacity(cfg.replications);
            let mut ptildes = Vec::with_capacity(cfg.replications);
            for rec in recs {
                let (k, p) = rec?;
                kns.push(k as f64);
                ptildes.push(p);
            }
            let alpha0 = atomic.alpha0(n as f64) as f64;
            let sqrt_n = (n as f64).sqrt();
            let (mean_kn, sd_kn) = mean_sd(&kns);
            let (mean_pt, sd_pt) = mean_sd(&ptildes);
            rows.push(OccupancyRow {
                law: name.clone(),
                n,
                mean_kn,
                sd_kn,
                mean_kn_over_sqrt_n: mean_kn / sqrt_n,
                sd_kn_over_sqrt_n: sd_kn / sqrt_n,
                mean_kn_over_alpha0: mean_kn / alpha0,
                sd_kn_over_alpha0: sd_kn / alpha0,
                mean_ptilde_f: mean_pt,
                sd_ptilde_f: sd_pt,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[OccupancyRow]) -> String {
    csv_document(CSV_HEADER, rows.iter().map(OccupancyRow::csv_row))
}
