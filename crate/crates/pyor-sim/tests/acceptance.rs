//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values next to its thresholds (run with `-- --nocapture` to
//! see them). Thresholds are pinned here, not tuned elsewhere.
//!
//! Runtime notes are printed per criterion; the heavy coverage study (#3)
//! targets minutes on an 8-core box and scales with available cores.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pyor::{
    bias, eppf_total_mass, mle_sigma, posterior_mean_exact, posterior_variance_exact,
    sigma_posterior, summarize, AtomicLaw, Dataset, Functional, GaussianLaw, Law,
    PartitionSummary, PyParams,
};
use pyor_sim::runner::pf_draws_parallel;
use pyor_sim::{band, coverage, occupancy, ExperimentConfig};

const P1_ATOMS: [(f64, f64); 6] =
    [(1.0, 0.1), (2.0, 0.1), (3.0, 0.2), (4.0, 0.2), (5.0, 0.3), (6.0, 0.1)];

fn p1() -> AtomicLaw {
    AtomicLaw::finite(&P1_ATOMS).unwrap()
}

fn law_sample_summary(law: &AtomicLaw, n: usize, seed: u64) -> PartitionSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
    summarize(&Dataset::new(values).unwrap())
}

fn coverage_config(replications: usize, draws: usize, n: usize) -> ExperimentConfig {
    let text = format!(
        r#"{{
        "laws": [
            {{"name": "P1", "kind": "finite",
             "atoms": [[1,0.1],[2,0.1],[3,0.2],[4,0.2],[5,0.3],[6,0.1]]}},
            {{"name": "P2", "kind": "powerlaw", "alpha": 2.0}},
            {{"name": "P3", "kind": "powerlaw", "alpha": 1.5}}
        ],
        "sigma": 0.5, "m": 1.0,
        "g": {{"kind": "gaussian", "mean": 1.0, "var": 1.0}},
        "f": {{"kind": "indicator_above", "a": 2.0}},
        "sample_sizes": [{n}],
        "replications": {replications},
        "posterior_draws": {draws},
        "level": [0.025, 0.975],
        "master_seed": 20260810,
        "sigma_mode": "fixed"
    }}"#
    );
    ExperimentConfig::from_json(&text).unwrap()
}

/// Criterion 1 — EPPF normalization by exhaustive partition enumeration:
/// total mass 1 within 1e−10 for all n ≤ 8, σ ∈ {0, 0.3, 0.7, 0.95},
/// M ∈ {0, 1, 5}. Runtime under 10 s.
#[test]
fn acceptance_01_eppf_normalization() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=8 {
        for sigma in [0.0, 0.3, 0.7, 0.95] {
            for m in [0.0, 1.0, 5.0] {
                let total = eppf_total_mass(n, sigma, m).unwrap();
                let gap = (total - 1.0).abs();
                worst = worst.max(gap);
                assert!(gap <= 1e-10, "n={n} sigma={sigma} M={m}: total = {total}");
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.1} s exceeds 10 s");
    println!(
        "criterion 1 (EPPF normalization): PASS — worst |total-1| = {worst:.2e}, runtime {elapsed:.2} s"
    );
}

/// Criterion 2 — Monte Carlo moments of 10⁶ posterior functional draws match
/// the closed forms within 3 SEs (mean) and 5% relative (variance) on a
/// fixed grid of 12 (law, f, σ, M) cases. Runtime target: under 2 min on the
/// reference 8-core box (printed here).
#[test]
fn acceptance_02_moment_oracle_equivalence() {
    let start = Instant::now();
    let g = GaussianLaw::new(1.0, 1.0).unwrap();
    let p1 = p1();
    let p2 = AtomicLaw::power_law(2.0).unwrap();
    let ind2 = Functional::IndicatorAbove { a: 2.0 };
    let two1 = Functional::TwoSided { a: 1.0 };
    let iv14 = Functional::IndicatorInterval { a: 1.0, b: 4.0 };
    let ident = Functional::Identity;

    // (law, f, sigma, M); spans σ ∈ {0, 0.25, 0.5}, M ∈ {0, 1, 10},
    // both laws and all functional shapes
    let cases: [(&AtomicLaw, Functional, f64, f64); 12] = [
        (&p1, ind2, 0.0, 0.0),
        (&p1, ind2, 0.0, 1.0),
        (&p1, ind2, 0.25, 1.0),
        (&p1, ind2, 0.5, 0.0),
        (&p1, ind2, 0.5, 1.0),
        (&p1, ind2, 0.5, 10.0),
        (&p1, ident, 0.5, 1.0),
        (&p1, iv14, 0.25, 0.0),
        (&p2, two1, 0.5, 1.0),
        (&p2, two1, 0.25, 10.0),
        (&p2, ind2, 0.5, 0.0),
        (&p2, ident, 0.0, 10.0),
    ];

    let n = 40;
    let draws = 1_000_000;
    for (i, (law, f, sigma, m)) in cases.iter().enumerate() {
        let summary = law_sample_summary(law, n, 4000 + i as u64);
        let params = PyParams::new(*sigma, *m, g).unwrap();
        let eps = pyor::default_epsilon(n);
        let xs = pf_draws_parallel(&params, &summary, f, eps, draws, 5000 + i as u64, 4096)
            .unwrap();
        let nf = draws as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let var = xs.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
        let se_mean = (var / nf).sqrt();

        let exact_mean = posterior_mean_exact(&params, &summary, f);
        let exact_var = posterior_variance_exact(&params, &summary, f);
        assert!(
            (mean - exact_mean).abs() <= 3.0 * se_mean,
            "case {i} (σ={sigma}, M={m}): mc mean {mean} vs exact {exact_mean}, se {se_mean:.2e}"
        );
        assert!(
            (var - exact_var).abs() <= 0.05 * exact_var,
            "case {i} (σ={sigma}, M={m}): mc var {var} vs exact {exact_var}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 2 (moment oracle equivalence): PASS — 12 cases × 1e6 draws, \
         runtime {elapsed:.0} s (target 120 s on 8 cores)"
    );
}

/// Criterion 3 — desk-scale reproduction of the coverage tables at n = 10³
/// with 2000 replications × 2000 posterior draws, σ = 1/2, M = 1, G = N(1,1),
/// f = 1_{[2,∞)}:
///   P1: uncorrected 0.957 ± 0.03, corrected 0.958 ± 0.03
///   P2: uncorrected 0.790 ± 0.04, corrected 0.958 ± 0.03
///   P3: uncorrected ≤ 0.10,      corrected ≥ 0.90
#[test]
fn acceptance_03_coverage_tables() {
    let start = Instant::now();
    let cfg = coverage_config(2000, 2000, 1000).resolve().unwrap();
    let rows = coverage::run_coverage(&cfg).unwrap();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        println!(
            "  {} n={}: uncorrected {:.4}, corrected {:.4} (se {:.4}, mean bias {:+.5}, mean K {:.1})",
            row.law, row.n, row.coverage_uncorrected, row.coverage_corrected,
            row.mc_standard_error, row.mean_bias, row.mean_kn
        );
    }
    let by_name = |name: &str| rows.iter().find(|r| r.law == name).unwrap();
    let p1 = by_name("P1");
    assert!(
        (p1.coverage_uncorrected - 0.957).abs() <= 0.03,
        "P1 uncorrected = {}",
        p1.coverage_uncorrected
    );
    assert!(
        (p1.coverage_corrected - 0.958).abs() <= 0.03,
        "P1 corrected = {}",
        p1.coverage_corrected
    );
    let p2 = by_name("P2");
    assert!(
        (p2.coverage_uncorrected - 0.790).abs() <= 0.04,
        "P2 uncorrected = {}",
        p2.coverage_uncorrected
    );
    assert!(
        (p2.coverage_corrected - 0.958).abs() <= 0.03,
        "P2 corrected = {}",
        p2.coverage_corrected
    );
    let p3 = by_name("P3");
    assert!(p3.coverage_uncorrected <= 0.10, "P3 uncorrected = {}", p3.coverage_uncorrected);
    assert!(p3.coverage_corrected >= 0.90, "P3 corrected = {}", p3.coverage_corrected);
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 3 (coverage tables, desk scale): PASS — runtime {:.0} s \
         (target 900 s on 8 cores)",
        elapsed
    );
}

/// Criterion 4 — bias limit: for P₂, f = 1_{(1,∞)} − 1_{(−∞,1]}, G = N(1,1),
/// σ = 1/2, the mean of √n·B_n(f) at n = 10⁵ over 200 replications has
/// magnitude 0.5·√(6/π) ≈ 0.6910 within ±15%. (With Gf = 0 and the distinct
/// values eventually containing atom 1, B_n(f) = −(σ/n)(K_n − 2) < 0; the
/// asymptotic magnitude is the σ√(6/π) of the noncoverage example.)
#[test]
fn acceptance_04_bias_limit() {
    let start = Instant::now();
    let p2 = AtomicLaw::power_law(2.0).unwrap();
    let g = GaussianLaw::new(1.0, 1.0).unwrap();
    let f = Functional::TwoSided { a: 1.0 };
    let n = 100_000;
    let reps = 200;
    let mut total = 0.0;
    for r in 0..reps {
        let summary = law_sample_summary(&p2, n, 60_000 + r);
        total += (n as f64).sqrt() * bias(0.5, &summary, &g, &f);
    }
    let mean = total / reps as f64;
    let target = 0.5 * (6.0 / std::f64::consts::PI).sqrt(); // 0.69099
    assert!(mean < 0.0, "sqrt(n)·B_n should be negative here, got {mean}");
    let rel = (mean.abs() - target).abs() / target;
    assert!(rel <= 0.15, "mean sqrt(n)·bias = {mean}, |·| vs {target}: rel gap {rel:.3}");
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 4 (bias limit): PASS — mean √n·B_n = {mean:.4}, magnitude target \
         {target:.4} ± 15%, runtime {elapsed:.0} s"
    );
}

/// Criterion 5 — occupancy asymptotics at n = 10⁵: mean K_n/α₀(n) = √π ± 0.1
/// for P₂ over 200 replications; K_n = 6 in at least 99.9% of replications
/// for P₁.
#[test]
fn acceptance_05_occupancy_asymptotics() {
    let start = Instant::now();
    let n = 100_000;
    let reps = 200;

    let p2 = AtomicLaw::power_law(2.0).unwrap();
    let alpha0 = p2.alpha0(n as f64) as f64;
    let mut ratio_sum = 0.0;
    for r in 0..reps {
        let summary = law_sample_summary(&p2, n, 70_000 + r);
        ratio_sum += summary.k() as f64 / alpha0;
    }
    let mean_ratio = ratio_sum / reps as f64;
    let target = std::f64::consts::PI.sqrt();
    assert!(
        (mean_ratio - target).abs() <= 0.1,
        "mean K_n/alpha0 = {mean_ratio}, want {target} ± 0.1"
    );

    let p1 = p1();
    let mut full = 0usize;
    for r in 0..reps {
        let summary = law_sample_summary(&p1, n, 80_000 + r);
        full += (summary.k() == 6) as usize;
    }
    assert!(
        full as f64 >= 0.999 * reps as f64,
        "P1 saw all six atoms in only {full}/{reps} replications"
    );
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 5 (occupancy asymptotics): PASS — P2 mean K/α₀ = {mean_ratio:.4} \
         (√π = {target:.4}), P1 full support {full}/{reps}, runtime {elapsed:.0} s"
    );
}

/// Criterion 6 — σ-inference at n = 10⁵ from P₂ (σ₀ = 1/2): the MLE lands in
/// [0.45, 0.55] in at least 90 of 100 replications and the grid posterior
/// puts at least 95% mass on [0.4, 0.6]; all-distinct samples give σ̂ = 1
/// deterministically.
#[test]
fn acceptance_06_sigma_inference() {
    let start = Instant::now();
    let p2 = AtomicLaw::power_law(2.0).unwrap();
    let n = 100_000;
    let reps = 100;
    let mut in_window = 0usize;
    let mut min_mass: f64 = 1.0;
    for r in 0..reps {
        let summary = law_sample_summary(&p2, n, 90_000 + r);
        let fit = mle_sigma(&summary, 1.0);
        in_window += (0.45..=0.55).contains(&fit.sigma_hat) as usize;
        let post = sigma_posterior(&summary, 1.0, |_| 1.0, 256).unwrap();
        min_mass = min_mass.min(post.mass_between(0.4, 0.6));
    }
    assert!(in_window >= 90, "MLE in [0.45, 0.55] only {in_window}/100 times");
    assert!(min_mass >= 0.95, "posterior mass on [0.4, 0.6] fell to {min_mass}");

    // all-distinct samples pin the estimate to the upper boundary
    let gauss = Law::Gaussian(GaussianLaw::new(0.0, 1.0).unwrap());
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(95_000 + seed);
        let values: Vec<f64> = (0..200).map(|_| gauss.sample(&mut rng)).collect();
        let fit = mle_sigma(&summarize(&Dataset::new(values).unwrap()), 1.0);
        assert_eq!(fit.sigma_hat, 1.0);
        assert_eq!(fit.boundary, pyor::Boundary::Upper);
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 6 (sigma inference): PASS — MLE in window {in_window}/100, min \
         posterior mass {min_mass:.4}, runtime {elapsed:.0} s"
    );
}

fn ks_to_standard_normal(zs: &mut [f64]) -> f64 {
    let std = GaussianLaw::new(0.0, 1.0).unwrap();
    zs.sort_by(f64::total_cmp);
    let n = zs.len() as f64;
    let mut ks: f64 = 0.0;
    for (i, &z) in zs.iter().enumerate() {
        let fz = std.cdf(z);
        ks = ks.max((fz - i as f64 / n).abs()).max(((i + 1) as f64 / n - fz).abs());
    }
    ks
}

/// Criterion 7 — Bernstein–von Mises normality: the standardized posterior
/// sample √n(Pf − ℙ_n f − B_n(f))/τ(f) for P₁ at n = 10⁴ is within 0.03 of
/// standard normal in Kolmogorov distance over 10⁴ draws; at n = 10² the
/// distance exceeds 0.03 (the posterior is still visibly skewed there).
#[test]
fn acceptance_07_bvm_normality() {
    let start = Instant::now();
    let law = p1();
    let g = GaussianLaw::new(1.0, 1.0).unwrap();
    let f = Functional::IndicatorAbove { a: 2.0 };
    let params = PyParams::new(0.5, 1.0, g).unwrap();
    let tau = law.variance_of(&f).unwrap().sqrt(); // √0.09

    let standardized = |n: usize, seed: u64| -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let data = Dataset::new(values).unwrap();
        let summary = summarize(&data);
        let pn_f = data.empirical(&f);
        let b = bias(0.5, &summary, &g, &f);
        let eps = pyor::default_epsilon(n);
        let draws = pf_draws_parallel(&params, &summary, &f, eps, 10_000, seed ^ 0xabcd, 1024)
            .unwrap();
        let root_n = (n as f64).sqrt();
        draws.iter().map(|&pf| root_n * (pf - pn_f - b) / tau).collect()
    };

    let mut z_large = standardized(10_000, 2026);
    let ks_large = ks_to_standard_normal(&mut z_large);
    assert!(ks_large < 0.03, "KS at n=1e4 is {ks_large}");

    let mut z_small = standardized(100, 3026);
    let ks_small = ks_to_standard_normal(&mut z_small);
    assert!(ks_small > 0.03, "KS at n=100 is {ks_small}, expected visible skew");

    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 7 (BvM normality): PASS — KS(n=1e4) = {ks_large:.4} < 0.03 < \
         KS(n=100) = {ks_small:.4}, runtime {elapsed:.0} s"
    );
}

/// Criterion 8 — simultaneous band coverage for P₁ at n = 10³, α = 0.025:
/// empirical coverage over 500 replications is 0.95 ± 0.03.
#[test]
fn acceptance_08_band_coverage() {
    let start = Instant::now();
    let text = r#"{
        "law": {"name": "P1", "kind": "finite",
                "atoms": [[1,0.1],[2,0.1],[3,0.2],[4,0.2],[5,0.3],[6,0.1]]},
        "sigma": 0.5, "m": 1.0,
        "g": {"kind": "gaussian", "mean": 1.0, "var": 1.0},
        "f": {"kind": "indicator_above", "a": 2.0},
        "sample_sizes": [1000],
        "replications": 500,
        "posterior_draws": 2000,
        "band_alpha": 0.025,
        "master_seed": 20260810
    }"#;
    let cfg = ExperimentConfig::from_json(text).unwrap().resolve().unwrap();
    let rows = band::run_band_coverage(&cfg).unwrap();
    let row = &rows[0];
    assert!(
        (row.coverage - 0.95).abs() <= 0.03,
        "band coverage = {} (se {})",
        row.coverage,
        row.mc_standard_error
    );
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 8 (band coverage): PASS — coverage {:.4} (target 0.95 ± 0.03, \
         mean ξ {:.3}), runtime {:.0} s",
        row.coverage, row.mean_xi, elapsed
    );
}

/// Criterion 9 — determinism: identical config and seed produce byte-
/// identical CSV under 1, 4 and 16 worker threads, for the coverage,
/// occupancy and full-Bayes coverage paths.
#[test]
fn acceptance_09_determinism() {
    let start = Instant::now();
    let mut cfg = coverage_config(16, 150, 120);
    cfg.sigma_mode = pyor_sim::SigmaMode::FullBayes;
    let fixed = coverage_config(16, 150, 120);

    let render_cov = |cfg: &ExperimentConfig, threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let resolved = cfg.resolve().unwrap();
        pool.install(|| coverage::to_csv(&coverage::run_coverage(&resolved).unwrap()))
    };
    let render_occ = |cfg: &ExperimentConfig, threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let resolved = cfg.resolve().unwrap();
        pool.install(|| occupancy::to_csv(&occupancy::run_occupancy(&resolved).unwrap()))
    };

    let base_fixed = render_cov(&fixed, 1);
    let base_fb = render_cov(&cfg, 1);
    let base_occ = render_occ(&fixed, 1);
    assert!(base_fixed.contains("P1") && base_fixed.lines().count() == 4);
    for threads in [4, 16] {
        assert_eq!(base_fixed, render_cov(&fixed, threads), "coverage differs at {threads} threads");
        assert_eq!(base_fb, render_cov(&cfg, threads), "full-bayes differs at {threads} threads");
        assert_eq!(base_occ, render_occ(&fixed, threads), "occupancy differs at {threads} threads");
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 9 (determinism): PASS — byte-identical CSV at 1/4/16 threads, \
         runtime {elapsed:.0} s"
    );
}
