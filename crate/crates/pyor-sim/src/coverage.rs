//! Credible-interval coverage study: per (law, n), the proportion of
//! replications whose uncorrected and bias-corrected intervals cover the
//! true functional value.

use rayon::prelude::*;

use crate::config::ResolvedConfig;
use crate::error::SimResult;
use crate::runner::coverage_replication;
use crate::table::{csv_document, csv_line, fmt};

#[derive(Clone, Debug)]
pub struct CoverageRow {
    pub law: String,
    pub n: usize,
    pub coverage_uncorrected: f64,
    pub coverage_corrected: f64,
    /// Binomial standard error of the uncorrected proportion.
    pub mc_standard_error: f64,
    pub mean_bias: f64,
    pub mean_kn: f64,
}

pub const CSV_HEADER: &str =
    "law,n,coverage_uncorrected,coverage_corrected,mc_standard_error,mean_bias,mean_kn";

impl CoverageRow {
    pub fn csv_row(&self) -> String {
        csv_line([
            self.law.clone(),
            self.n.to_string(),
            fmt(self.coverage_uncorrected),
            fmt(self.coverage_corrected),
            fmt(self.mc_standard_error),
            fmt(self.mean_bias),
            fmt(self.mean_kn),
        ])
    }
}

pub fn run_coverage(cfg: &ResolvedConfig) -> SimResult<Vec<CoverageRow>> {
    let reps = cfg.replications;
    let mut rows = Vec::new();
    for (law_id, (name, law)) in cfg.laws.iter().enumerate() {
        let p0f = law.integral(&cfg.f)?;
        for &n in &cfg.sample_sizes {
            let recs: Vec<_> = (0..reps)
                .into_par_iter()
                .map(|r| coverage_replication(cfg, law, law_id as u64, n, r as u64, p0f))
                .collect();
            // sequential aggregation in replication order keeps the floating
            // sums byte-stable across worker counts
            let mut unc = 0usize;
            let mut cor = 0usize;
            let mut bias_sum = 0.0;
            let mut kn_sum = 0usize;
            for rec in recs {
                let rec = rec?;
                unc += rec.covered_uncorrected as usize;
                cor += rec.covered_corrected as usize;
                bias_sum += rec.bias;
                kn_sum += rec.kn;
            }
            let pu = unc as f64 / reps as f64;
            rows.push(CoverageRow {
                law: name.clone(),
                n,
                coverage_uncorrected: pu,
                coverage_corrected: cor as f64 / reps as f64,
                mc_standard_error: (pu * (1.0 - pu) / reps as f64).sqrt(),
                mean_bias: bias_sum / reps as f64,
                mean_kn: kn_sum as f64 / reps as f64,
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[CoverageRow]) -> String {
    csv_document(CSV_HEADER, rows.iter().map(CoverageRow::csv_row))
}
