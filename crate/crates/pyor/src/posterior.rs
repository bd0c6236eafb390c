//! Exact draws from the Pitman-Yor posterior and closed-form moments.
//!
//! Given a sample with partition summary `(K_n, N_{n,1..K_n})`, the posterior
//! of `P` under `PY(σ, M, G)` is the law of `R_n S_n + (1 − R_n) Q_n` with
//! independent
//!
//! * `R_n ~ Beta(n − σK_n, M + σK_n)`,
//! * `S_n = Σ_j W_{n,j} δ_{X̃_j}` with `W_n ~ Dir(N_{n,1}−σ, …, N_{n,K_n}−σ)`,
//! * `Q_n ~ PY(σ, M + σK_n, G)`.
//!
//! Draws consume the random stream in exactly that order (`R`, then the `K_n`
//! Dirichlet Gammas, then the stick loop of `Q_n`), which the fused fast
//! paths rely on.

use rand::Rng;

use crate::functional::Functional;
use crate::laws::{AtomicLaw, GaussianLaw};
use crate::sampling;
use crate::stats::PartitionSummary;
use crate::stick::{sample_py, sample_py_cdf_into, sample_py_integral, PyParams, WeightedAtoms};
use crate::{Error, Result};

/// Default stick-breaking truncation for posterior sampling at sample size
/// `n`: one tenth of the `n^{-1/2}` tail-mass target. The residual is
/// reassigned to a fresh base-measure atom, so the truncation leaves no mass
/// deficit and the posterior mean of any functional is preserved exactly.
pub fn default_epsilon(n: usize) -> f64 {
    0.1 / (n as f64).sqrt()
}

/// One draw from the posterior: the Beta mixing weight, the Dirichlet weights
/// on the observed distinct values, and the fresh Pitman-Yor component.
#[derive(Clone, Debug)]
pub struct PosteriorDraw {
    pub r: f64,
    pub weights: Vec<f64>,
    pub fresh: WeightedAtoms,
}

fn mixing_shapes(params: &PyParams, summary: &PartitionSummary) -> Result<(f64, f64)> {
    let n = summary.n() as f64;
    let k = summary.k() as f64;
    let u = n - params.sigma() * k;
    if u <= 0.0 {
        return Err(Error::DegenerateBeta(u));
    }
    Ok((u, params.m() + params.sigma() * k))
}

/// Draws `(R_n, W_n, Q_n)` from the exact posterior.
pub fn posterior_draw<R: Rng + ?Sized>(
    params: &PyParams,
    summary: &PartitionSummary,
    eps: f64,
    rng: &mut R,
) -> Result<PosteriorDraw> {
    let (u, v) = mixing_shapes(params, summary)?;
    let r = sampling::beta(u, v, rng);
    let mut weights = Vec::with_capacity(summary.k());
    draw_dirichlet_weights(params, summary, rng, &mut weights)?;
    let fresh_params = PyParams::new(params.sigma(), v, *params.base())?;
    let fresh = sample_py(&fresh_params, eps, rng)?;
    Ok(PosteriorDraw { r, weights, fresh })
}

fn draw_dirichlet_weights<R: Rng + ?Sized>(
    params: &PyParams,
    summary: &PartitionSummary,
    rng: &mut R,
    out: &mut Vec<f64>,
) -> Result<()> {
    out.clear();
    let mut total = 0.0;
    for &nj in summary.multiplicities() {
        let g = sampling::gamma(nj as f64 - params.sigma(), rng);
        total += g;
        out.push(g);
    }
    if total <= 0.0 {
        return Err(Error::Domain(
            "all Dirichlet gammas underflowed to zero; sigma too close to 1".into(),
        ));
    }
    for w in out.iter_mut() {
        *w /= total;
    }
    Ok(())
}

/// `∫ f d(PY_n)` for one posterior draw:
/// `r·Σ_j w_j f(X̃_j) + (1 − r)·∫ f dQ_n`.
pub fn eval_draw(draw: &PosteriorDraw, summary: &PartitionSummary, f: &Functional) -> f64 {
    let sf: f64 = draw
        .weights
        .iter()
        .zip(summary.distinct())
        .map(|(&w, &x)| w * f.evaluate(x))
        .sum();
    draw.r * sf + (1.0 - draw.r) * draw.fresh.integrate(f)
}

/// Fused draw-and-evaluate: same random stream and the same arithmetic as
/// `eval_draw(&posterior_draw(..), ..)`, without materializing the fresh
/// measure. `scratch` avoids re-allocating the Dirichlet vector per draw.
pub fn posterior_pf<R: Rng + ?Sized>(
    params: &PyParams,
    summary: &PartitionSummary,
    f: &Functional,
    eps: f64,
    rng: &mut R,
    scratch: &mut Vec<f64>,
) -> Result<f64> {
    let (u, v) = mixing_shapes(params, summary)?;
    let r = sampling::beta(u, v, rng);
    draw_dirichlet_weights(params, summary, rng, scratch)?;
    let sf: f64 = scratch
        .iter()
        .zip(summary.distinct())
        .map(|(&w, &x)| w * f.evaluate(x))
        .sum();
    let fresh_params = PyParams::new(params.sigma(), v, *params.base())?;
    let qf = sample_py_integral(&fresh_params, eps, f, rng)?;
    Ok(r * sf + (1.0 - r) * qf)
}

/// One posterior CDF path evaluated on a sorted grid, written into `out`
/// (overwritten). Stream order matches [`posterior_draw`].
pub fn posterior_cdf_row<R: Rng + ?Sized>(
    params: &PyParams,
    summary: &PartitionSummary,
    grid: &[f64],
    eps: f64,
    rng: &mut R,
    scratch: &mut Vec<f64>,
    out: &mut [f64],
) -> Result<()> {
    debug_assert_eq!(grid.len(), out.len());
    let (u, v) = mixing_shapes(params, summary)?;
    let r = sampling::beta(u, v, rng);
    draw_dirichlet_weights(params, summary, rng, scratch)?;
    out.fill(0.0);
    for (&w, &x) in scratch.iter().zip(summary.distinct()) {
        let idx = grid.partition_point(|&t| t < x);
        if idx < out.len() {
            out[idx] += r * w;
        }
    }
    let fresh_params = PyParams::new(params.sigma(), v, *params.base())?;
    sample_py_cdf_into(&fresh_params, eps, grid, 1.0 - r, rng, out)?;
    // buckets → CDF
    for j in 1..out.len() {
        out[j] += out[j - 1];
    }
    Ok(())
}

/// Closed-form posterior mean:
/// `E[Pf | X] = Σ_j (N_j − σ) f(X̃_j)/(n + M) + (M + σK_n)/(n + M) · Gf`.
pub fn posterior_mean_exact(
    params: &PyParams,
    summary: &PartitionSummary,
    f: &Functional,
) -> f64 {
    let n = summary.n() as f64;
    let k = summary.k() as f64;
    let sigma = params.sigma();
    let m = params.m();
    let weighted: f64 = summary
        .multiplicities()
        .iter()
        .zip(summary.distinct())
        .map(|(&nj, &x)| (nj as f64 - sigma) * f.evaluate(x))
        .sum();
    (weighted + (m + sigma * k) * params.base().integral(f)) / (n + m)
}

/// Closed-form posterior variance (law of total variance over the mixture
/// representation):
///
/// ```text
/// Var(Pf | X) = [Σ_j (N_j−σ) f_j / u  −  Gf]² · u·v / ((n+M)²(n+M+1))
///             − (Σ_j (N_j−σ) f_j)² / (u (n+M)(n+M+1))
///             + Σ_j (N_j−σ) f_j² / ((n+M)(n+M+1))
///             + (1−σ)·v · Var_G(f) / ((n+M)(n+M+1)),
/// ```
///
/// with `u = n − σK_n`, `v = M + σK_n`. The last term uses
/// `Var(Q_n f) = (1−σ)/(v+1)·Var_G(f)` (two draws from `PY(σ, v, G)` tie with
/// probability `(1−σ)/(v+1)`), which makes the formula reduce exactly to the
/// plain Dirichlet posterior variance when `σ = 0`, `M = 0`.
pub fn posterior_variance_exact(
    params: &PyParams,
    summary: &PartitionSummary,
    f: &Functional,
) -> f64 {
    let n = summary.n() as f64;
    let k = summary.k() as f64;
    let sigma = params.sigma();
    let m = params.m();
    let u = n - sigma * k;
    let v = m + sigma * k;
    let nm = n + m;
    let nm1 = n + m + 1.0;

    let mut wf = 0.0; // Σ (N_j − σ) f_j
    let mut wf2 = 0.0; // Σ (N_j − σ) f_j²
    for (&nj, &x) in summary.multiplicities().iter().zip(summary.distinct()) {
        let fx = f.evaluate(x);
        let a = nj as f64 - sigma;
        wf += a * fx;
        wf2 += a * fx * fx;
    }
    let gf = params.base().integral(f);
    let var_g = params.base().variance_of(f);

    let centered = wf / u - gf;
    centered * centered * u * v / (nm * nm * nm1) - wf * wf / (u * nm * nm1)
        + wf2 / (nm * nm1)
        + (1.0 - sigma) * v * var_g / (nm * nm1)
}

/// The truth `P₀ = (1 − λ)P₀^d + λP₀^c` split into its discrete and atomless
/// parts. The discrete part is required when `λ < 1`, the continuous part
/// when `λ > 0`.
#[derive(Clone, Debug)]
pub struct P0Decomposition {
    lambda: f64,
    discrete: Option<AtomicLaw>,
    continuous: Option<GaussianLaw>,
}

impl P0Decomposition {
    pub fn new(
        lambda: f64,
        discrete: Option<AtomicLaw>,
        continuous: Option<GaussianLaw>,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "discrete/continuous split must lie in [0,1], got {lambda}"
            )));
        }
        if lambda < 1.0 && discrete.is_none() {
            return Err(Error::InvalidParameter(
                "discrete component required when lambda < 1".into(),
            ));
        }
        if lambda > 0.0 && continuous.is_none() {
            return Err(Error::InvalidParameter(
                "continuous component required when lambda > 0".into(),
            ));
        }
        Ok(Self { lambda, discrete, continuous })
    }

    pub fn discrete_law(law: AtomicLaw) -> Self {
        Self { lambda: 0.0, discrete: Some(law), continuous: None }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn discrete_integral(&self, f: &Functional) -> Result<f64> {
        match &self.discrete {
            Some(d) => d.integral(f),
            None => Ok(0.0), // weight 1 − λ = 0
        }
    }

    fn discrete_integral_sq(&self, f: &Functional) -> Result<f64> {
        match &self.discrete {
            Some(d) => d.integral_sq(f),
            None => Ok(0.0),
        }
    }

    fn continuous_integral(&self, f: &Functional) -> f64 {
        self.continuous.as_ref().map_or(0.0, |c| c.integral(f))
    }

    fn continuous_integral_sq(&self, f: &Functional) -> f64 {
        self.continuous.as_ref().map_or(0.0, |c| c.integral_sq(f))
    }
}

/// `lim_n E[Pf | X] = (1 − λ)P₀^d f + (1 − σ)λ P₀^c f + λσ Gf`.
pub fn limit_mean(
    decomp: &P0Decomposition,
    sigma: f64,
    g: &GaussianLaw,
    f: &Functional,
) -> Result<f64> {
    let lambda = decomp.lambda();
    let mut total = lambda * sigma * g.integral(f);
    if lambda < 1.0 {
        total += (1.0 - lambda) * decomp.discrete_integral(f)?;
    }
    if lambda > 0.0 {
        total += (1.0 - sigma) * lambda * decomp.continuous_integral(f);
    }
    Ok(total)
}

/// `lim_n n·Var(Pf | X)`, the five-term display:
///
/// ```text
/// (1−λ)Var_{P₀^d}(f) + (1−σ)λ Var_{P₀^c}(f) + (1−σ)σλ Var_G(f)
///   + (1−σ)λ(1−λ)/(1−σλ) · (P₀^d f − P₀^c f)²
///   + (1−σλ)σλ · ((( 1−λ)P₀^d f + (1−σ)λP₀^c f)/(1−σλ) − Gf)²
/// ```
pub fn limit_variance(
    decomp: &P0Decomposition,
    sigma: f64,
    g: &GaussianLaw,
    f: &Functional,
) -> Result<f64> {
    let lambda = decomp.lambda();
    let sl = sigma * lambda;
    let mut total = 0.0;

    let (df, dvar) = if lambda < 1.0 {
        let m = decomp.discrete_integral(f)?;
        (m, decomp.discrete_integral_sq(f)? - m * m)
    } else {
        (0.0, 0.0)
    };
    let (cf, cvar) = if lambda > 0.0 {
        let m = decomp.continuous_integral(f);
        (m, decomp.continuous_integral_sq(f) - m * m)
    } else {
        (0.0, 0.0)
    };

    total += (1.0 - lambda) * dvar;
    total += (1.0 - sigma) * lambda * cvar;
    total += (1.0 - sigma) * sigma * lambda * g.variance_of(f);
    if lambda > 0.0 && lambda < 1.0 {
        let gap = df - cf;
        total += (1.0 - sigma) * lambda * (1.0 - lambda) * gap * gap / (1.0 - sl);
    }
    let centered = ((1.0 - lambda) * df + (1.0 - sigma) * lambda * cf) / (1.0 - sl) - g.integral(f);
    total += (1.0 - sl) * sl * centered * centered;
    Ok(total)
}
