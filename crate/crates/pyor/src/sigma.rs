//! Inference for the type parameter σ from the exchangeable partition.
//!
//! The partition of `{1..n}` induced by ties is sufficient for σ; its
//! probability (the EPPF) is
//!
//! ```text
//! p_σ(N_1, …, N_K) = Π_{i=1}^{K−1}(M + iσ) / (M+1)^{[n−1]} · Π_j (1−σ)^{[N_j−1]}
//! ```
//!
//! with `a^{[n]} = a(a+1)⋯(a+n−1)`. The log likelihood is strictly concave in
//! σ, so the maximizer is found by bisecting the score; the full-Bayes route
//! evaluates the same likelihood on a grid.

use rand::Rng;

use crate::stats::PartitionSummary;
use crate::{Error, Result};

/// `log a^{[n]} = Σ_{k<n} log(a+k)`, with `a^{[0]} = 1`. Large `n` goes
/// through `lnΓ(a+n) − lnΓ(a)`, which agrees with the direct sum to ~1e−13.
pub fn ascending_factorial_log(a: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "ascending factorial needs a positive base, got a = {a}"
        )));
    }
    if n <= 32 {
        let mut total = 0.0;
        for k in 0..n {
            total += (a + k as f64).ln();
        }
        Ok(total)
    } else {
        use statrs::function::gamma::ln_gamma;
        Ok(ln_gamma(a + n as f64) - ln_gamma(a))
    }
}

/// Log of the EPPF at `(σ, M)` for the observed partition.
///
/// Preconditions `0 ≤ σ < 1`, `M ≥ 0`. At the degenerate corner
/// `σ = M = 0` the prior is a single atom, so every partition with `K ≥ 2`
/// has probability zero and the log likelihood is `−∞` (the total mass over
/// partitions still sums to one).
pub fn eppf_log(summary: &PartitionSummary, sigma: f64, m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::Domain(format!("eppf needs sigma in [0,1), got {sigma}")));
    }
    if !(m >= 0.0) {
        return Err(Error::Domain(format!("eppf needs M >= 0, got {m}")));
    }
    let n = summary.n();
    let k = summary.k();

    let mut log_num = 0.0;
    for i in 1..k {
        let factor = m + i as f64 * sigma;
        if factor <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        log_num += factor.ln();
    }
    let denom = ascending_factorial_log(m + 1.0, n - 1)?;
    let mut log_ties = 0.0;
    for &nj in summary.multiplicities() {
        log_ties += ascending_factorial_log(1.0 - sigma, nj - 1)?;
    }
    Ok(log_num - denom + log_ties)
}

/// Test oracle: total EPPF mass over all set partitions of `{1..n}`,
/// enumerated through restricted-growth strings. Must return one.
pub fn eppf_total_mass(n: usize, sigma: f64, m: f64) -> Result<f64> {
    if n == 0 || n > 10 {
        return Err(Error::Domain(format!("partition enumeration supports 1 ≤ n ≤ 10, got {n}")));
    }
    let mut total = 0.0;
    let mut rgs = vec![0usize; n];
    loop {
        // the RGS assigns item i to block rgs[i]; rebuild the partition's
        // summary by treating block labels as values
        let data = crate::stats::Dataset::new(rgs.iter().map(|&b| b as f64).collect())?;
        let summary = crate::stats::summarize(&data);
        total += eppf_log(&summary, sigma, m)?.exp();

        // next restricted-growth string
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(total);
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// `Λ′_n(σ)`, the derivative of the log EPPF in σ:
/// `Σ_{l=1}^{K−1} l/(M+lσ) − Σ_{l≥1} Z_{n,l+1}/(l−σ)`.
///
/// Finite for σ ∈ [0,1) whenever `M > 0`; at `M = 0` the left limit at
/// `σ = 0` is `+∞` for `K ≥ 2` (the likelihood is increasing there), which
/// the bisection in [`mle_sigma`] handles transparently.
pub fn score(summary: &PartitionSummary, sigma: f64, m: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&sigma) && m >= 0.0);
    let k = summary.k();
    let mut first = 0.0;
    for l in 1..k {
        first += l as f64 / (m + l as f64 * sigma);
    }
    let mut second = 0.0;
    for l in 1..summary.max_multiplicity() {
        let z = summary.z(l + 1);
        if z > 0 {
            second += z as f64 / (l as f64 - sigma);
        }
    }
    first - second
}

/// Which end of `[0, 1]` the maximizer landed on, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Lower,
    Interior,
    Upper,
}

/// Result of maximizing the EPPF over σ.
#[derive(Clone, Copy, Debug)]
pub struct SigmaFit {
    pub sigma_hat: f64,
    pub boundary: Boundary,
    pub score_at_hat: f64,
    pub iterations: usize,
}

const BISECT_DELTA: f64 = 1e-12;

/// Empirical-Bayes estimate of σ.
///
/// All observations distinct forces `σ̂ = 1` (the score is a sum of positive
/// terms); a nonpositive score at zero pins `σ̂ = 0`; otherwise the strictly
/// decreasing score is bisected on `[0, 1 − 1e−12]` to width `1e−12`.
pub fn mle_sigma(summary: &PartitionSummary, m: f64) -> SigmaFit {
    let k = summary.k();
    let n = summary.n();
    if k == n {
        return SigmaFit {
            sigma_hat: 1.0,
            boundary: Boundary::Upper,
            score_at_hat: score(summary, 1.0 - BISECT_DELTA, m),
            iterations: 0,
        };
    }
    let score_zero = score(summary, 0.0, m);
    if score_zero <= 0.0 {
        return SigmaFit {
            sigma_hat: 0.0,
            boundary: Boundary::Lower,
            score_at_hat: score_zero,
            iterations: 0,
        };
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0 - BISECT_DELTA;
    let mut iterations = 0;
    while hi - lo > BISECT_DELTA {
        let mid = 0.5 * (lo + hi);
        if score(summary, mid, m) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let sigma_hat = 0.5 * (lo + hi);
    SigmaFit {
        sigma_hat,
        boundary: Boundary::Interior,
        score_at_hat: score(summary, sigma_hat, m),
        iterations,
    }
}

/// Grid posterior for σ under a prior density on (0, 1).
#[derive(Clone, Debug)]
pub struct SigmaPosterior {
    grid: Vec<f64>,
    log_weights: Vec<f64>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

/// Evaluates the (unnormalized log-) posterior `log π(σ) + Λ_n(σ)` at the
/// midpoints of a uniform grid on (0, 1) and normalizes by log-sum-exp.
pub fn sigma_posterior(
    summary: &PartitionSummary,
    m: f64,
    prior_density: impl Fn(f64) -> f64,
    grid_size: usize,
) -> Result<SigmaPosterior> {
    if grid_size < 64 {
        return Err(Error::InvalidParameter(format!(
            "sigma grid needs at least 64 points, got {grid_size}"
        )));
    }
    let mut grid = Vec::with_capacity(grid_size);
    let mut log_weights = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let s = (i as f64 + 0.5) / grid_size as f64;
        let p = prior_density(s);
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "prior density must be positive and finite on (0,1); got {p} at {s}"
            )));
        }
        grid.push(s);
        log_weights.push(p.ln() + eppf_log(summary, s, m)?);
    }
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Domain("sigma posterior is identically zero on the grid".into()));
    }
    let mut probs: Vec<f64> = log_weights.iter().map(|&lw| (lw - max).exp()).collect();
    let total: f64 = probs.iter().sum();
    let mut cumulative = Vec::with_capacity(grid_size);
    let mut run = 0.0;
    for p in probs.iter_mut() {
        *p /= total;
        run += *p;
        cumulative.push(run);
    }
    Ok(SigmaPosterior { grid, log_weights, probs, cumulative })
}

impl SigmaPosterior {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn mean(&self) -> f64 {
        self.grid.iter().zip(&self.probs).map(|(&s, &p)| s * p).sum()
    }

    /// Smallest grid point whose cumulative probability reaches `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let idx = self.cumulative.partition_point(|&c| c < q);
        self.grid[idx.min(self.grid.len() - 1)]
    }

    /// Posterior mass on `[lo, hi]`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        self.grid
            .iter()
            .zip(&self.probs)
            .filter(|&(&s, _)| s >= lo && s <= hi)
            .map(|(_, &p)| p)
            .sum()
    }

    /// Grid point with maximal posterior probability.
    pub fn mode(&self) -> f64 {
        let (idx, _) = self
            .probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is nonempty");
        self.grid[idx]
    }

    /// Inverse-CDF sampling over the grid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random())
    }
}
