//! Raw posterior functional draws for density plots: one column per
//! replication (independent dataset), one row per posterior draw. Smoothing
//! is left to downstream tools.

use rayon::prelude::*;

use crate::config::ResolvedConfig;
use crate::error::{SimError, SimResult};
use crate::runner::{draw_dataset, posterior_pf_draws, SigmaState};
use crate::seed;
use crate::table::{csv_document, csv_line, fmt};

pub struct DensityOutput {
    pub law: String,
    pub n: usize,
    /// True value `P₀f`, recorded in the sidecar metadata.
    pub true_pf: f64,
    /// `draws[rep][draw_index]`.
    pub draws: Vec<Vec<f64>>,
}

pub fn run_density(cfg: &ResolvedConfig) -> SimResult<DensityOutput> {
    if cfg.laws.len() != 1 || cfg.sample_sizes.len() != 1 {
        return Err(SimError::Config(
            "density expects exactly one law and one sample size".into(),
        ));
    }
    let (name, law) = &cfg.laws[0];
    let n = cfg.sample_sizes[0];
    let true_pf = law.integral(&cfg.f)?;
    let draws: Vec<SimResult<Vec<f64>>> = (0..cfg.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::rng_for(cfg.master_seed, 0, n as u64, r as u64);
            let data = draw_dataset(law, n, &mut rng)?;
            let summary = pyor::summarize(&data);
            let state = SigmaState::for_replication(cfg, &summary)?;
            let mut pf = Vec::with_capacity(cfg.posterior_draws);
            posterior_pf_draws(cfg, &summary, &state, cfg.epsilon_for(n), &mut rng, &mut pf)?;
            Ok(pf)
        })
        .collect();
    let draws = draws.into_iter().collect::<SimResult<Vec<_>>>()?;
    Ok(DensityOutput { law: name.clone(), n, true_pf, draws })
}

pub fn to_csv(out: &DensityOutput) -> String {
    let header = csv_line((0..out.draws.len()).map(|r| format!("rep_{r}")));
    let n_draws = out.draws.first().map_or(0, Vec::len);
    let rows = (0..n_draws).map(|d| csv_line(out.draws.iter().map(|col| fmt(col[d]))));
    csv_document(&header, rows)
}
