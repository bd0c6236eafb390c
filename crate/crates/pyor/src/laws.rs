//! True data-generating laws and the Gaussian base measure.
//!
//! The discrete laws are a finite table of weighted atoms and the power law
//! `P{k} = c·k^{−α}` on the positive integers with `c = 1/ζ(α)`. Both sample
//! by exact CDF inversion. The power law keeps a prefix table of CDF values
//! for indices up to [`PREFIX_LEN`] and switches to an Euler–Maclaurin tail
//! expansion (bisected over the index) beyond it, keeping the relative CDF
//! error below 1e−10 everywhere.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::functional::Functional;
use crate::{Error, Result};

// Error functions from the system math library (~1 ulp).
#[link(name = "m")]
extern "C" {
    #[link_name = "erf"]
    fn erf_raw(x: f64) -> f64;
    #[link_name = "erfc"]
    fn erfc_raw(x: f64) -> f64;
}

#[inline]
fn erf(x: f64) -> f64 {
    unsafe { erf_raw(x) }
}

#[inline]
fn erfc(x: f64) -> f64 {
    unsafe { erfc_raw(x) }
}

/// Number of cached prefix-CDF entries for the power law.
pub const PREFIX_LEN: usize = 1_000_000;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Compensated (Kahan) accumulator; the prefix tables need every stored
/// partial sum accurate to a few ulps.
#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `Σ_{j ≥ m} j^{−α}` by Euler–Maclaurin; accurate to `O(m^{−α−5})` relative,
/// far below 1e−12 for the `m ≥ PREFIX_LEN` arguments used here.
fn power_tail_from(m: f64, alpha: f64) -> f64 {
    let head = m.powf(1.0 - alpha) / (alpha - 1.0);
    let half = 0.5 * m.powf(-alpha);
    let b2 = alpha * m.powf(-alpha - 1.0) / 12.0;
    let b4 = alpha * (alpha + 1.0) * (alpha + 2.0) * m.powf(-alpha - 3.0) / 720.0;
    head + half + b2 - b4
}

/// Riemann zeta on `(1, ∞)`: compensated partial sum to `PREFIX_LEN` plus the
/// same tail expansion. Absolute error well under 1e−12 for α ≥ 1.1.
fn zeta(alpha: f64) -> f64 {
    let mut acc = Kahan::default();
    for j in 1..=PREFIX_LEN {
        acc.add((j as f64).powf(-alpha));
    }
    acc.sum + power_tail_from(PREFIX_LEN as f64 + 1.0, alpha)
}

/// A discrete law with finitely many weighted atoms.
#[derive(Clone, Debug)]
pub struct FiniteTable {
    values: Vec<f64>,
    weights: Vec<f64>,
    /// CDF aligned with `values` (construction order), for inversion.
    cdf: Vec<f64>,
    /// (value, cumulative weight) sorted by value, for `cdf(t)`.
    sorted_cdf: Vec<(f64, f64)>,
}

impl FiniteTable {
    pub fn new(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("finite table needs at least one atom".into()));
        }
        let mut values = Vec::with_capacity(atoms.len());
        let mut weights = Vec::with_capacity(atoms.len());
        let mut acc = Kahan::default();
        let mut cdf = Vec::with_capacity(atoms.len());
        for &(v, w) in atoms {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("atom value {v} is not finite")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "atom weight {w} must be strictly positive"
                )));
            }
            values.push(v);
            weights.push(w);
            acc.add(w);
            cdf.push(acc.sum);
        }
        if (acc.sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "atom weights sum to {}, not 1",
                acc.sum
            )));
        }
        let mut sorted: Vec<(f64, f64)> = values.iter().copied().zip(weights.iter().copied()).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        if sorted.windows(2).any(|w| w[0].0.to_bits() == w[1].0.to_bits()) {
            return Err(Error::InvalidParameter("atom values must be distinct".into()));
        }
        let mut run = Kahan::default();
        let sorted_cdf = sorted
            .into_iter()
            .map(|(v, w)| {
                run.add(w);
                (v, run.sum)
            })
            .collect();
        Ok(Self { values, weights, cdf, sorted_cdf })
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.weights.iter().copied())
    }

    /// Smallest atom (in construction order) whose CDF reaches `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        let idx = self.cdf.partition_point(|&c| c < u);
        self.values[idx.min(self.values.len() - 1)]
    }

    pub fn cdf(&self, t: f64) -> f64 {
        let idx = self.sorted_cdf.partition_point(|&(v, _)| v <= t);
        if idx == 0 {
            0.0
        } else {
            self.sorted_cdf[idx - 1].1
        }
    }

    fn sum_over_atoms(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = Kahan::default();
        for (&v, &w) in self.values.iter().zip(&self.weights) {
            acc.add(w * f(v));
        }
        acc.sum
    }
}

/// The heavy-tailed law `P{k} = k^{−α}/ζ(α)` on `k = 1, 2, …`, with exact
/// inversion: `quantile(u)` returns the smallest `k` with `CDF(k) ≥ u`.
#[derive(Clone, Debug)]
pub struct PowerLaw {
    alpha: f64,
    zeta_alpha: f64,
    /// `1/ζ(α)`, the weight of atom 1.
    scale: f64,
    /// `prefix_cdf[k-1] = CDF(k)` for `k = 1..=PREFIX_LEN`; pre-sized at
    /// construction so reads need no synchronization.
    prefix_cdf: Vec<f64>,
}

impl PowerLaw {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "power-law exponent must be finite and > 1, got {alpha}"
            )));
        }
        let zeta_alpha = zeta(alpha);
        let scale = 1.0 / zeta_alpha;
        let mut acc = Kahan::default();
        let mut prefix_cdf = Vec::with_capacity(PREFIX_LEN);
        for j in 1..=PREFIX_LEN {
            acc.add((j as f64).powf(-alpha));
            prefix_cdf.push(scale * acc.sum);
        }
        Ok(Self { alpha, zeta_alpha, scale, prefix_cdf })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `P{k}` for integer `k ≥ 1`.
    pub fn weight(&self, k: f64) -> f64 {
        self.scale * k.powf(-self.alpha)
    }

    /// CDF at integer index `k ≥ 1` (table below `PREFIX_LEN`, tail expansion
    /// above).
    fn cdf_index(&self, k: u128) -> f64 {
        debug_assert!(k >= 1);
        if k <= PREFIX_LEN as u128 {
            self.prefix_cdf[(k - 1) as usize]
        } else {
            1.0 - self.scale * power_tail_from(k as f64 + 1.0, self.alpha)
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t < 1.0 {
            0.0
        } else {
            self.cdf_index(t.floor() as u128)
        }
    }

    /// Smallest `k` with `CDF(k) ≥ u`, for `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        debug_assert!((0.0..1.0).contains(&u));
        let last = *self.prefix_cdf.last().unwrap();
        if u <= last {
            let idx = self.prefix_cdf.partition_point(|&c| c < u);
            return (idx + 1).min(PREFIX_LEN) as f64;
        }
        // Tail: bisect {k : scale * tail(k+1) ≤ 1 − u} over integers.
        let target = 1.0 - u;
        let hit = |k: u128| self.scale * power_tail_from(k as f64 + 1.0, self.alpha) <= target;
        let mut lo = PREFIX_LEN as u128; // known miss
        let mut hi = 2 * lo;
        while !hit(hi) {
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if hit(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi as f64
    }

    /// `α₀(u) = #{k : 1/P{k} ≤ u} = ⌊(u/ζ(α))^{1/α}⌋`, with a relative slack
    /// of 1e−12 so boundary-exact arguments count the boundary atom.
    pub fn alpha0(&self, u: f64) -> u64 {
        let x = (self.scale * u).powf(1.0 / self.alpha);
        (x * (1.0 + 1e-12)).floor().max(0.0) as u64
    }

    fn zeta_ratio(&self, shift: f64) -> f64 {
        zeta(self.alpha - shift) / self.zeta_alpha
    }
}

/// A Gaussian law; used both as the base (center) measure `G` and as the
/// atomless component of a decomposed truth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianLaw {
    mean: f64,
    var: f64,
    sd: f64,
}

impl GaussianLaw {
    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !mean.is_finite() || !var.is_finite() || var <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gaussian requires finite mean and variance > 0, got ({mean}, {var})"
            )));
        }
        Ok(Self { mean, var, sd: var.sqrt() })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn var(&self) -> f64 {
        self.var
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.mean + self.sd * z
    }

    /// `Φ((x − μ)/s)` through `erfc`; absolute error ≤ 1e−15.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        0.5 * erfc(-z / SQRT_2)
    }

    /// `P(X ≥ x)`, computed in the tail-stable direction.
    pub fn upper_tail(&self, x: f64) -> f64 {
        let z = (x - self.mean) / self.sd;
        0.5 * erfc(z / SQRT_2)
    }

    /// Inverse CDF (used for credible-band grids, not sampling).
    pub fn quantile(&self, p: f64) -> f64 {
        use statrs::distribution::ContinuousCDF;
        statrs::distribution::Normal::new(self.mean, self.sd)
            .expect("validated at construction")
            .inverse_cdf(p)
    }

    pub fn integral(&self, f: &Functional) -> f64 {
        match *f {
            Functional::IndicatorAbove { a } => self.upper_tail(a),
            // 1_{(a,∞)} − 1_{(−∞,a]} integrates to 1 − 2Φ(z) = −erf(z/√2).
            Functional::TwoSided { a } => -erf((a - self.mean) / (self.sd * SQRT_2)),
            Functional::IndicatorInterval { a, b } => {
                let za = (a - self.mean) / (self.sd * SQRT_2);
                let zb = (b - self.mean) / (self.sd * SQRT_2);
                0.5 * (erf(zb) - erf(za))
            }
            Functional::Identity => self.mean,
        }
    }

    pub fn integral_sq(&self, f: &Functional) -> f64 {
        match *f {
            Functional::IndicatorAbove { .. } | Functional::IndicatorInterval { .. } => {
                self.integral(f)
            }
            Functional::TwoSided { .. } => 1.0,
            Functional::Identity => self.mean * self.mean + self.var,
        }
    }

    /// `Var_G(f) = G f² − (G f)²`.
    pub fn variance_of(&self, f: &Functional) -> f64 {
        let m = self.integral(f);
        self.integral_sq(f) - m * m
    }
}

/// A discrete true law: finite table or power law.
#[derive(Clone, Debug)]
pub enum AtomicLaw {
    Finite(FiniteTable),
    PowerLaw(PowerLaw),
}

impl AtomicLaw {
    pub fn finite(atoms: &[(f64, f64)]) -> Result<Self> {
        FiniteTable::new(atoms).map(AtomicLaw::Finite)
    }

    pub fn power_law(alpha: f64) -> Result<Self> {
        PowerLaw::new(alpha).map(AtomicLaw::PowerLaw)
    }

    /// Inverse CDF: the smallest support point whose CDF reaches `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            AtomicLaw::Finite(t) => t.quantile(u),
            AtomicLaw::PowerLaw(p) => p.quantile(u),
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random())
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            AtomicLaw::Finite(tab) => tab.cdf(t),
            AtomicLaw::PowerLaw(p) => p.cdf(t),
        }
    }

    pub fn integral(&self, f: &Functional) -> Result<f64> {
        match self {
            AtomicLaw::Finite(t) => Ok(t.sum_over_atoms(|v| f.evaluate(v))),
            AtomicLaw::PowerLaw(p) => match *f {
                Functional::IndicatorAbove { a } => {
                    if a <= 1.0 {
                        Ok(1.0)
                    } else {
                        Ok(1.0 - p.cdf_index(a.ceil() as u128 - 1))
                    }
                }
                Functional::TwoSided { a } => Ok(1.0 - 2.0 * p.cdf(a)),
                Functional::IndicatorInterval { a, b } => Ok(p.cdf(b) - p.cdf(a)),
                Functional::Identity => {
                    if p.alpha <= 2.0 {
                        Err(Error::DivergentMoment(format!(
                            "power law with exponent {} has no mean",
                            p.alpha
                        )))
                    } else {
                        Ok(p.zeta_ratio(1.0))
                    }
                }
            },
        }
    }

    pub fn integral_sq(&self, f: &Functional) -> Result<f64> {
        match self {
            AtomicLaw::Finite(t) => {
                let val = t.sum_over_atoms(|v| {
                    let y = f.evaluate(v);
                    y * y
                });
                Ok(val)
            }
            AtomicLaw::PowerLaw(p) => match *f {
                Functional::IndicatorAbove { .. } | Functional::IndicatorInterval { .. } => {
                    self.integral(f)
                }
                Functional::TwoSided { .. } => Ok(1.0),
                Functional::Identity => {
                    if p.alpha <= 3.0 {
                        Err(Error::DivergentMoment(format!(
                            "power law with exponent {} has no second moment",
                            p.alpha
                        )))
                    } else {
                        Ok(p.zeta_ratio(2.0))
                    }
                }
            },
        }
    }

    /// `Var_{P}(f)`; errors if either moment diverges.
    pub fn variance_of(&self, f: &Functional) -> Result<f64> {
        let m = self.integral(f)?;
        Ok(self.integral_sq(f)? - m * m)
    }

    /// `α₀(u) = #{x : 1/P{x} ≤ u}`, the number of atoms with weight at least
    /// `1/u` (with 1e−12 relative slack at the boundary).
    pub fn alpha0(&self, u: f64) -> u64 {
        match self {
            AtomicLaw::Finite(t) => {
                let cutoff = (1.0 / u) * (1.0 - 1e-12);
                t.weights.iter().filter(|&&w| w >= cutoff).count() as u64
            }
            AtomicLaw::PowerLaw(p) => p.alpha0(u),
        }
    }
}

/// Either a discrete law or a Gaussian; what experiment configs resolve to.
#[derive(Clone, Debug)]
pub enum Law {
    Atomic(AtomicLaw),
    Gaussian(GaussianLaw),
}

impl Law {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Law::Atomic(a) => a.sample(rng),
            Law::Gaussian(g) => g.sample(rng),
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            Law::Atomic(a) => a.cdf(t),
            Law::Gaussian(g) => g.cdf(t),
        }
    }

    pub fn integral(&self, f: &Functional) -> Result<f64> {
        match self {
            Law::Atomic(a) => a.integral(f),
            Law::Gaussian(g) => Ok(g.integral(f)),
        }
    }

    pub fn integral_sq(&self, f: &Functional) -> Result<f64> {
        match self {
            Law::Atomic(a) => a.integral_sq(f),
            Law::Gaussian(g) => Ok(g.integral_sq(f)),
        }
    }

    pub fn as_atomic(&self) -> Option<&AtomicLaw> {
        match self {
            Law::Atomic(a) => Some(a),
            Law::Gaussian(_) => None,
        }
    }
}

/// JSON description of a law:
/// `{"kind":"finite","atoms":[[1,0.1],…]}`, `{"kind":"powerlaw","alpha":2.0}`
/// or `{"kind":"gaussian","mean":1.0,"var":1.0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LawSpec {
    Finite { atoms: Vec<(f64, f64)> },
    Powerlaw { alpha: f64 },
    Gaussian { mean: f64, var: f64 },
}

impl LawSpec {
    pub fn build(&self) -> Result<Law> {
        match self {
            LawSpec::Finite { atoms } => Ok(Law::Atomic(AtomicLaw::finite(atoms)?)),
            LawSpec::Powerlaw { alpha } => Ok(Law::Atomic(AtomicLaw::power_law(*alpha)?)),
            LawSpec::Gaussian { mean, var } => Ok(Law::Gaussian(GaussianLaw::new(*mean, *var)?)),
        }
    }

    pub fn default_name(&self) -> String {
        match self {
            LawSpec::Finite { .. } => "finite".to_string(),
            LawSpec::Powerlaw { alpha } => format!("powerlaw({alpha})"),
            LawSpec::Gaussian { mean, var } => format!("gaussian({mean},{var})"),
        }
    }
}
