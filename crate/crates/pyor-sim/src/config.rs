//! Experiment configuration: JSON in, validated runtime objects out.

use serde::{Deserialize, Serialize};

use pyor::{Functional, GaussianLaw, Law, LawSpec};

use crate::error::{SimError, SimResult};

/// How σ enters the posterior.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// Use the configured σ as-is.
    Fixed,
    /// Substitute the maximum-likelihood estimate per replication.
    EmpiricalBayes,
    /// Draw σ from its grid posterior for every posterior draw.
    FullBayes,
}

impl Default for SigmaMode {
    fn default() -> Self {
        SigmaMode::Fixed
    }
}

/// A law plus the name used for it in output tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedLaw {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub spec: LawSpec,
}

impl NamedLaw {
    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.spec.default_name())
    }
}

/// One or many laws; a bare object and a list both parse.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(NamedLaw),
    Many(Vec<NamedLaw>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<NamedLaw> {
        match self {
            OneOrMany::One(l) => vec![l],
            OneOrMany::Many(v) => v,
        }
    }
}

fn default_replications() -> usize {
    2000
}

fn default_posterior_draws() -> usize {
    2000
}

fn default_level() -> (f64, f64) {
    (0.025, 0.975)
}

fn default_sigma_grid() -> usize {
    256
}

fn default_band_alpha() -> f64 {
    0.025
}

/// The JSON experiment description shared by all subcommands. Unused fields
/// are simply ignored by runners that do not need them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// True law(s) the samples are drawn from (`law` accepts one or a list).
    #[serde(alias = "laws")]
    pub law: OneOrMany,
    pub sigma: f64,
    pub m: f64,
    /// Base (center) measure of the prior.
    pub g: GaussianSpec,
    /// Functional under study.
    pub f: Functional,
    pub sample_sizes: Vec<usize>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_posterior_draws")]
    pub posterior_draws: usize,
    /// Credible-interval quantile pair (α, β).
    #[serde(default = "default_level")]
    pub level: (f64, f64),
    pub master_seed: u64,
    #[serde(default)]
    pub sigma_mode: SigmaMode,
    #[serde(default)]
    pub output_path: Option<String>,
    /// Stick-breaking truncation; default is 0.1/√n per sample size.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Grid size for the σ posterior (full-Bayes mode and sigma studies).
    #[serde(default = "default_sigma_grid")]
    pub sigma_grid_size: usize,
    /// One-sided level for credible bands (band coverage targets 1 − 2α).
    #[serde(default = "default_band_alpha")]
    pub band_alpha: f64,
}

/// `{"kind":"gaussian","mean":…,"var":…}` or a bare `{"mean":…,"var":…}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianSpec {
    #[serde(default)]
    pub kind: Option<String>,
    pub mean: f64,
    pub var: f64,
}

impl GaussianSpec {
    pub fn build(&self) -> SimResult<GaussianLaw> {
        if let Some(kind) = &self.kind {
            if kind != "gaussian" {
                return Err(SimError::Config(format!(
                    "base measure must be gaussian, got kind {kind:?}"
                )));
            }
        }
        GaussianLaw::new(self.mean, self.var).map_err(SimError::Numeric)
    }
}

/// Validated, ready-to-run form of the config.
pub struct ResolvedConfig {
    pub laws: Vec<(String, Law)>,
    pub sigma: f64,
    pub m: f64,
    pub g: GaussianLaw,
    pub f: Functional,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub posterior_draws: usize,
    pub level: (f64, f64),
    pub master_seed: u64,
    pub sigma_mode: SigmaMode,
    pub epsilon: Option<f64>,
    pub sigma_grid_size: usize,
    pub band_alpha: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> SimResult<Self> {
        serde_json::from_str(text).map_err(|e| SimError::Config(format!("config JSON: {e}")))
    }

    pub fn resolve(&self) -> SimResult<ResolvedConfig> {
        if self.replications < 1 {
            return Err(SimError::Config("replications must be at least 1".into()));
        }
        if self.posterior_draws < 100 {
            return Err(SimError::Config("posterior_draws must be at least 100".into()));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&n| n < 1) {
            return Err(SimError::Config("sample_sizes must be nonempty and ≥ 1".into()));
        }
        let (alpha, beta) = self.level;
        if !(0.0 < alpha && alpha < beta && beta < 1.0) {
            return Err(SimError::Config(format!(
                "level must satisfy 0 < α < β < 1, got ({alpha}, {beta})"
            )));
        }
        if !(0.0..1.0).contains(&self.sigma) {
            return Err(SimError::Config(format!("sigma must lie in [0, 1), got {}", self.sigma)));
        }
        if !(self.m >= 0.0) {
            return Err(SimError::Config(format!("m must be nonnegative, got {}", self.m)));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(SimError::Config(format!("epsilon must lie in (0,1), got {eps}")));
            }
        }
        if !(0.0 < self.band_alpha && self.band_alpha < 0.5) {
            return Err(SimError::Config(format!(
                "band_alpha must lie in (0, 0.5), got {}",
                self.band_alpha
            )));
        }
        self.f.validate().map_err(|e| SimError::Config(e.to_string()))?;
        let laws = self
            .law
            .clone()
            .into_vec()
            .into_iter()
            .map(|nl| {
                let name = nl.name();
                nl.spec.build().map(|law| (name, law)).map_err(SimError::Numeric)
            })
            .collect::<SimResult<Vec<_>>>()?;
        if laws.is_empty() {
            return Err(SimError::Config("at least one law is required".into()));
        }
        Ok(ResolvedConfig {
            laws,
            sigma: self.sigma,
            m: self.m,
            g: self.g.build()?,
            f: self.f,
            sample_sizes: self.sample_sizes.clone(),
            replications: self.replications,
            posterior_draws: self.posterior_draws,
            level: self.level,
            master_seed: self.master_seed,
            sigma_mode: self.sigma_mode,
            epsilon: self.epsilon,
            sigma_grid_size: self.sigma_grid_size,
            band_alpha: self.band_alpha,
        })
    }
}

impl ResolvedConfig {
    /// Truncation for posterior sampling at sample size `n`.
    pub fn epsilon_for(&self, n: usize) -> f64 {
        self.epsilon.unwrap_or_else(|| pyor::default_epsilon(n))
    }
}
