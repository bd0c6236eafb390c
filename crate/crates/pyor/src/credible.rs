//! Bias term, credible intervals for `Pf`, and simultaneous credible bands
//! for the CDF.

use crate::functional::Functional;
use crate::laws::GaussianLaw;
use crate::stats::PartitionSummary;
use crate::{Error, Result};

/// The centering bias `B_n(f) = (σ K_n / n) (Gf − P̃_n f)`.
///
/// Shifting a credible interval by `−B_n(f)` restores asymptotic coverage
/// when `K_n/√n` does not vanish.
pub fn bias(sigma: f64, summary: &PartitionSummary, g: &GaussianLaw, f: &Functional) -> f64 {
    let n = summary.n() as f64;
    let k = summary.k() as f64;
    sigma * k / n * (g.integral(f) - summary.ptilde(f))
}

/// Interpolated order-statistic quantile (the common "type 7" convention:
/// rank `(N−1)p`, linear interpolation). `sorted` must be ascending.
fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

/// An equal-tail credible interval from posterior functional draws.
#[derive(Clone, Copy, Debug)]
pub struct CredibleInterval {
    pub lo: f64,
    pub hi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub corrected: bool,
    /// The `B_n(f)` that was (or would be) subtracted.
    pub bias: f64,
}

impl CredibleInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

const MIN_DRAWS: usize = 100;

/// Empirical `[Q_α, Q_β]` of the draws; when `corrected`, both endpoints are
/// shifted by `−bias`.
pub fn interval(
    pf_draws: &[f64],
    alpha: f64,
    beta: f64,
    bias: f64,
    corrected: bool,
) -> Result<CredibleInterval> {
    if pf_draws.len() < MIN_DRAWS {
        return Err(Error::InsufficientDraws { got: pf_draws.len(), min: MIN_DRAWS });
    }
    if !(0.0 < alpha && alpha < beta && beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "quantile levels must satisfy 0 < α < β < 1, got ({alpha}, {beta})"
        )));
    }
    let mut sorted = pf_draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let shift = if corrected { bias } else { 0.0 };
    Ok(CredibleInterval {
        lo: quantile_type7(&sorted, alpha) - shift,
        hi: quantile_type7(&sorted, beta) - shift,
        alpha,
        beta,
        corrected,
        bias,
    })
}

/// Options for [`band`].
#[derive(Clone, Copy, Debug)]
pub struct BandOptions {
    /// One-sided tail level; the band targets simultaneous coverage `1 − 2α`.
    pub alpha: f64,
    /// Floor for the pointwise posterior scale.
    pub s_min: f64,
    /// Floor degenerate scales instead of erroring.
    pub floor_scale: bool,
}

impl Default for BandOptions {
    fn default() -> Self {
        Self { alpha: 0.025, s_min: 1e-4, floor_scale: true }
    }
}

/// A simultaneous credible band `m_n(t) ± ξ · s_n(t)` on a grid.
#[derive(Clone, Debug)]
pub struct CredibleBand {
    grid: Vec<f64>,
    center: Vec<f64>,
    scale: Vec<f64>,
    xi: f64,
    alpha: f64,
}

impl CredibleBand {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    /// The calibrated quantile `ξ_{n,1−α}` of the posterior sup statistic.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lower(&self, j: usize) -> f64 {
        self.center[j] - self.xi * self.scale[j]
    }

    pub fn upper(&self, j: usize) -> f64 {
        self.center[j] + self.xi * self.scale[j]
    }

    /// Whether a CDF evaluated on the same grid lies inside the band at
    /// every grid point.
    pub fn covers(&self, f0_on_grid: &[f64]) -> bool {
        assert_eq!(f0_on_grid.len(), self.grid.len());
        f0_on_grid
            .iter()
            .enumerate()
            .all(|(j, &f0)| self.lower(j) <= f0 && f0 <= self.upper(j))
    }
}

/// Calibrates a band from posterior CDF draws (rows) over `grid` (columns).
///
/// `center`/`scale` default to the pointwise posterior mean and standard
/// deviation of the draws; `ξ` is the empirical `(1−α)`-quantile of the
/// per-draw statistic `sup_t |(F(t) − m_n(t))/s_n(t)|`.
pub fn band(
    cdf_draws: &[Vec<f64>],
    grid: &[f64],
    center: Option<Vec<f64>>,
    scale: Option<Vec<f64>>,
    opts: &BandOptions,
) -> Result<CredibleBand> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("band grid must be nonempty".into()));
    }
    if cdf_draws.len() < MIN_DRAWS {
        return Err(Error::InsufficientDraws { got: cdf_draws.len(), min: MIN_DRAWS });
    }
    if !(0.0 < opts.alpha && opts.alpha < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "band level must satisfy 0 < α < 1/2, got {}",
            opts.alpha
        )));
    }
    let rows = cdf_draws.len() as f64;
    let cols = grid.len();

    let center = match center {
        Some(c) => {
            if c.len() != cols {
                return Err(Error::InvalidParameter("band center length mismatch".into()));
            }
            c
        }
        None => {
            let mut c = vec![0.0; cols];
            for row in cdf_draws {
                for (acc, &x) in c.iter_mut().zip(row) {
                    *acc += x;
                }
            }
            for acc in c.iter_mut() {
                *acc /= rows;
            }
            c
        }
    };
    let scale = match scale {
        Some(s) => {
            if s.len() != cols {
                return Err(Error::InvalidParameter("band scale length mismatch".into()));
            }
            s
        }
        None => {
            let mut s = vec![0.0; cols];
            for row in cdf_draws {
                for ((acc, &x), &m) in s.iter_mut().zip(row).zip(&center) {
                    let d = x - m;
                    *acc += d * d;
                }
            }
            for acc in s.iter_mut() {
                // sample standard deviation
                *acc = (*acc / (rows - 1.0)).sqrt();
            }
            s
        }
    };
    let mut floored = Vec::with_capacity(cols);
    for (j, &s) in scale.iter().enumerate() {
        if s < opts.s_min {
            if !opts.floor_scale {
                return Err(Error::DegenerateScale { t: grid[j], sd: s, floor: opts.s_min });
            }
            floored.push(opts.s_min);
        } else {
            floored.push(s);
        }
    }

    let mut sups: Vec<f64> = cdf_draws
        .iter()
        .map(|row| {
            row.iter()
                .zip(&center)
                .zip(&floored)
                .map(|((&x, &m), &s)| ((x - m) / s).abs())
                .fold(0.0_f64, f64::max)
        })
        .collect();
    sups.sort_by(f64::total_cmp);
    let xi = quantile_type7(&sups, 1.0 - opts.alpha);

    Ok(CredibleBand { grid: grid.to_vec(), center, scale: floored, xi, alpha: opts.alpha })
}

/// Default evaluation grid for CDF bands: the distinct observed values plus
/// the 1%,…,99% quantiles of the base measure, deduplicated and sorted.
pub fn cdf_grid(summary: &PartitionSummary, g: &GaussianLaw) -> Vec<f64> {
    let mut grid: Vec<f64> = summary.distinct().to_vec();
    for i in 1..=99 {
        grid.push(g.quantile(i as f64 / 100.0));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| a.to_bits() == b.to_bits());
    grid
}
