//! Stick-breaking realizations of the Pitman-Yor prior.

use rand::Rng;

use crate::functional::Functional;
use crate::laws::GaussianLaw;
use crate::sampling;
use crate::{Error, Result};

/// Iteration cap for the stick loop; hitting it signals pathological
/// parameters rather than a recoverable condition.
pub const MAX_STICKS: usize = 10_000_000;

/// Parameters of `PY(σ, M, G)` with nonnegative type: `0 ≤ σ < 1`, `M ≥ 0`.
#[derive(Clone, Copy, Debug)]
pub struct PyParams {
    sigma: f64,
    m: f64,
    g: GaussianLaw,
}

impl PyParams {
    pub fn new(sigma: f64, m: f64, g: GaussianLaw) -> Result<Self> {
        if !(0.0..1.0).contains(&sigma) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("type must lie in [0, 1), got {sigma}")));
        }
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "concentration must be nonnegative, got {m}"
            )));
        }
        Ok(Self { sigma, m, g })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn base(&self) -> &GaussianLaw {
        &self.g
    }
}

/// A realized (truncated) random probability measure: atom locations and
/// weights summing to one, with the leftover stick mass assigned to one
/// final fresh atom so the measure is exact.
#[derive(Clone, Debug)]
pub struct WeightedAtoms {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    residual_index: usize,
}

impl WeightedAtoms {
    /// Assembles a measure from explicit parts (mainly for tests and fixed
    /// fixtures); weights must be nonnegative and sum to one within 1e−12.
    pub fn from_parts(atoms: Vec<f64>, weights: Vec<f64>, residual_index: usize) -> Result<Self> {
        if atoms.len() != weights.len() || atoms.is_empty() || residual_index >= atoms.len() {
            return Err(Error::InvalidParameter("mismatched atom/weight vectors".into()));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { atoms, weights, residual_index })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Index of the atom that received the leftover stick mass.
    pub fn residual_index(&self) -> usize {
        self.residual_index
    }

    pub fn residual_weight(&self) -> f64 {
        self.weights[self.residual_index]
    }

    /// `Σ w_i f(atom_i)`.
    pub fn integrate(&self, f: &Functional) -> f64 {
        self.weights
            .iter()
            .zip(&self.atoms)
            .map(|(&w, &a)| w * f.evaluate(a))
            .sum()
    }

    /// `P(−∞, t]` of the realized measure.
    pub fn cdf_at(&self, t: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.atoms)
            .filter(|&(_, &a)| a <= t)
            .map(|(&w, _)| w)
            .sum()
    }
}

/// Core stick loop. Draws `V_i ~ Beta(1−σ, M+iσ)` and `θ_i ~ G` until the
/// residual `Π(1−V_j)` falls below `eps`, then hands the residual mass to a
/// final fresh atom. The visitor receives `(weight, atom)` pairs in draw
/// order; the last visited pair is the residual atom.
#[inline]
fn break_sticks<R: Rng + ?Sized>(
    params: &PyParams,
    eps: f64,
    rng: &mut R,
    mut visit: impl FnMut(f64, f64),
) -> Result<usize> {
    debug_assert!(eps > 0.0 && eps < 1.0);
    let a = 1.0 - params.sigma;
    let mut residual = 1.0_f64;
    for i in 1..=MAX_STICKS {
        let v = sampling::beta(a, params.m + i as f64 * params.sigma, rng);
        let theta = params.g.sample(rng);
        let w = v * residual;
        residual *= 1.0 - v;
        if w > 0.0 {
            visit(w, theta);
        }
        if residual < eps {
            let tail_atom = params.g.sample(rng);
            visit(residual, tail_atom);
            return Ok(i + 1);
        }
    }
    Err(Error::IterationCap(MAX_STICKS))
}

/// Samples one truncated `PY(σ, M, G)` realization; the returned measure has
/// total mass exactly one up to floating rounding and residual mass `< eps`.
pub fn sample_py<R: Rng + ?Sized>(
    params: &PyParams,
    eps: f64,
    rng: &mut R,
) -> Result<WeightedAtoms> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("truncation must lie in (0,1), got {eps}")));
    }
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    break_sticks(params, eps, rng, |w, theta| {
        weights.push(w);
        atoms.push(theta);
    })?;
    let residual_index = atoms.len() - 1;
    Ok(WeightedAtoms { atoms, weights, residual_index })
}

/// `∫ f dP` for a fresh stick-breaking draw, streamed without materializing
/// the atoms. Consumes the random stream exactly as [`sample_py`] does, and
/// accumulates `w·f(θ)` in the same order, so the result is bit-identical to
/// `sample_py(..).integrate(f)`.
pub fn sample_py_integral<R: Rng + ?Sized>(
    params: &PyParams,
    eps: f64,
    f: &Functional,
    rng: &mut R,
) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("truncation must lie in (0,1), got {eps}")));
    }
    let mut acc = 0.0;
    break_sticks(params, eps, rng, |w, theta| {
        acc += w * f.evaluate(theta);
    })?;
    Ok(acc)
}

/// Streams a fresh draw's mass into buckets over a sorted grid: bucket `j`
/// receives `scale · (mass in (grid[j−1], grid[j]])`; prefix-summing the
/// buckets afterwards yields the scaled CDF on the grid. Random stream and
/// termination are identical to [`sample_py`].
pub(crate) fn sample_py_cdf_into<R: Rng + ?Sized>(
    params: &PyParams,
    eps: f64,
    grid: &[f64],
    scale: f64,
    rng: &mut R,
    out: &mut [f64],
) -> Result<()> {
    debug_assert_eq!(grid.len(), out.len());
    // Accumulate point masses per bucket, then suffix... prefix-sum once at
    // the end: bucket j holds mass in (grid[j-1], grid[j]].
    break_sticks(params, eps, rng, |w, theta| {
        let idx = grid.partition_point(|&t| t < theta);
        // atoms beyond the last grid point contribute to no bucket
        if idx < out.len() {
            out[idx] += scale * w;
        }
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::GaussianLaw;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(sigma: f64, m: f64) -> PyParams {
        PyParams::new(sigma, m, GaussianLaw::new(1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn epsilon_near_one_breaks_one_stick() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = sample_py(&params(0.5, 1.0), 1.0 - 1e-12, &mut rng).unwrap();
            assert_eq!(m.len(), 2); // one stick plus the residual atom
            let total: f64 = m.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_mass_below_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for eps in [0.5, 0.1, 0.01] {
            for _ in 0..100 {
                let m = sample_py(&params(0.5, 1.0), eps, &mut rng).unwrap();
                assert!(m.residual_weight() < eps);
                assert_eq!(m.residual_index(), m.len() - 1);
                let total: f64 = m.weights().iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                assert!(m.weights().iter().all(|&w| w >= 0.0));
            }
        }
    }

    #[test]
    fn dirichlet_case_residual_mean() {
        // σ = 0, M = 1: the residual after k sticks has mean 2^{-k}.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = params(0.0, 1.0);
        let reps = 40_000;
        let (mut r1, mut r2) = (0.0, 0.0);
        let mut n2 = 0usize;
        for _ in 0..reps {
            let m = sample_py(&p, 1e-9, &mut rng).unwrap();
            let w = m.weights();
            r1 += 1.0 - w[0];
            if w.len() >= 3 {
                r2 += 1.0 - w[0] - w[1];
                n2 += 1;
            }
        }
        let mean_r1 = r1 / reps as f64;
        let mean_r2 = r2 / n2 as f64;
        // SE(r1) = sqrt(1/12)/200 ≈ 0.0015; allow 4 SEs.
        assert!((mean_r1 - 0.5).abs() < 0.006, "mean residual after 1 stick = {mean_r1}");
        assert!((mean_r2 - 0.25).abs() < 0.006, "mean residual after 2 sticks = {mean_r2}");
    }

    #[test]
    fn first_weight_mean() {
        // E W₁ = E V₁ = (1−σ)/(1−σ+M+σ) = 0.25 for σ = 0.5, M = 1.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = params(0.5, 1.0);
        let reps = 100_000;
        let mut sum = 0.0;
        for _ in 0..reps {
            let m = sample_py(&p, 0.05, &mut rng).unwrap();
            sum += m.weights()[0];
        }
        let mean = sum / reps as f64;
        assert!((mean - 0.25).abs() < 0.005, "mean W1 = {mean}");
    }

    #[test]
    fn prior_mean_is_base_integral() {
        // Residual reassignment keeps E ∫f dP = Gf exact for any truncation.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = params(0.5, 1.0);
        let f = Functional::IndicatorAbove { a: 2.0 };
        let gf = p.base().integral(&f);
        let reps = 100_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..reps {
            let v = sample_py_integral(&p, 0.05, &f, &mut rng).unwrap();
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / reps as f64;
        let sd = (sumsq / reps as f64 - mean * mean).sqrt();
        let se = sd / (reps as f64).sqrt();
        assert!((mean - gf).abs() < 3.0 * se, "mean = {mean}, Gf = {gf}, se = {se}");
    }

    #[test]
    fn integrate_normalization_and_trivials() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for sigma in [0.0, 0.25, 0.5, 0.75] {
            let p = params(sigma, 1.0);
            let m = sample_py(&p, 0.01, &mut rng).unwrap();
            let one = m.integrate(&Functional::IndicatorAbove { a: -100.0 });
            assert!((one - 1.0).abs() < 1e-12, "sigma {sigma}: mass {one}");
        }
        let m = WeightedAtoms { atoms: vec![3.0], weights: vec![1.0], residual_index: 0 };
        assert_eq!(m.integrate(&Functional::IndicatorAbove { a: 2.0 }), 1.0);
        let m = WeightedAtoms {
            atoms: vec![0.0, 4.0],
            weights: vec![0.5, 0.5],
            residual_index: 1,
        };
        assert_eq!(m.integrate(&Functional::Identity), 2.0);
    }

    #[test]
    fn streamed_integral_matches_materialized() {
        let p = params(0.5, 2.0);
        let f = Functional::TwoSided { a: 1.0 };
        for seed in 0..20 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            let full = sample_py(&p, 0.01, &mut r1).unwrap().integrate(&f);
            let streamed = sample_py_integral(&p, 0.01, &f, &mut r2).unwrap();
            assert_eq!(full.to_bits(), streamed.to_bits());
        }
    }

    #[test]
    fn iteration_cap_signals_pathological_parameters() {
        // At σ = 0.95 the residual decays like k^{-1/19}; reaching 0.01
        // would take ~10^38 sticks, so the cap must fire.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let err = sample_py(&params(0.95, 1.0), 0.01, &mut rng).unwrap_err();
        assert!(matches!(err, Error::IterationCap(_)));
    }

    #[test]
    fn degenerate_prior_is_single_atom() {
        // PY(0, 0, G) is a point mass at one G draw.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = sample_py(&params(0.0, 0.0), 0.5, &mut rng).unwrap();
        assert_eq!(m.weights()[0], 1.0);
        let total: f64 = m.weights().iter().sum();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn cdf_stream_matches_materialized() {
        let p = params(0.5, 2.0);
        let grid = [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0];
        for seed in 0..10 {
            let mut r1 = ChaCha8Rng::seed_from_u64(100 + seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(100 + seed);
            let m = sample_py(&p, 0.02, &mut r1).unwrap();
            let mut row = vec![0.0; grid.len()];
            sample_py_cdf_into(&p, 0.02, &grid, 1.0, &mut r2, &mut row).unwrap();
            // prefix-sum buckets to get the CDF
            for j in 1..row.len() {
                row[j] += row[j - 1];
            }
            for (j, &t) in grid.iter().enumerate() {
                assert!((row[j] - m.cdf_at(t)).abs() < 1e-12);
            }
        }
    }
}
