//! Composable invariant suites behind the CLI `selftest` command: closed
//! forms against the pipeline, the Wick engine against its sampling oracle,
//! symmetry checks, and kernel exactness against brute-force sums.

use crate::closedform::{so2_crit_density, su2_crit_density, su_zero_density};
use crate::ensemble::{
    enumerate_multi_indices, monomial_derivative, multinomial_coeff_f64, EnsembleSpec, Field, Mode,
};
use crate::error::Result;
use crate::kacrice::density;
use crate::kernel::{evaluate_normalized, kernel_partial};
use crate::wick::{build_xi_map, wick_det_expectation, wick_mc_oracle};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

/// Outcome of one named suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    /// Worst error observed, in the suite's own metric.
    pub max_error: f64,
    pub detail: String,
}

/// Combined self-test report.
#[derive(Debug, Clone, Serialize)]
pub struct SelfTestReport {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn suite_closed_form_vs_pipeline() -> Result<SuiteResult> {
    let mut max_rel = 0.0f64;
    // critical, complex, m = 1
    for n in [2u32, 10, 50] {
        for z in [c(0.0, 0.0), c(0.4, 0.7), c(-1.2, 0.3)] {
            let spec = EnsembleSpec::new(1, n, Field::Complex, Mode::Critical)?;
            let got = density(&spec, &[z])?.density;
            let want = su2_crit_density(n, z);
            max_rel = max_rel.max((got - want).abs() / want);
        }
    }
    // zeros, complex, m = 1 and 2
    for n in [3u32, 12] {
        let spec = EnsembleSpec::new(1, n, Field::Complex, Mode::Zeros)?;
        let z = [c(0.5, -0.3)];
        let got = density(&spec, &z)?.density;
        let want = su_zero_density(1, n, &z);
        max_rel = max_rel.max((got - want).abs() / want);

        let spec = EnsembleSpec::new(2, n, Field::Complex, Mode::Zeros)?;
        let z = [c(0.5, -0.3), c(0.1, 0.6)];
        let got = density(&spec, &z)?.density;
        let want = su_zero_density(2, n, &z);
        max_rel = max_rel.max((got - want).abs() / want);
    }
    // real field, m = 1, against the closed form with its error term
    for n in [10u32, 25] {
        for z in [c(0.0, 0.5), c(0.6, 0.4)] {
            let spec = EnsembleSpec::new(1, n, Field::Real, Mode::Critical)?;
            let got = density(&spec, &[z])?.density;
            let want = so2_crit_density(n, z)?;
            max_rel = max_rel.max((got - want).abs() / want);
        }
    }
    Ok(SuiteResult {
        name: "closed-form-vs-pipeline".into(),
        passed: max_rel < 1e-5,
        max_error: max_rel,
        detail: "max relative gap across SU/SO closed forms".into(),
    })
}

fn suite_wick_vs_oracle() -> Result<SuiteResult> {
    let mut worst_sigma = 0.0f64;
    for m in 1..=2usize {
        let map = build_xi_map(m, Mode::Critical);
        for seed in 0..4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let dim = map.reduced_len();
            let g = DMatrix::from_fn(dim, dim, |_, _| {
                rand::Rng::sample::<f64, _>(&mut rng, StandardNormal)
            });
            let lambda = &g * g.transpose();
            let analytic = wick_det_expectation(&lambda, &map)?;
            let (mean, se) = wick_mc_oracle(&lambda, &map, 60_000, &mut rng)?;
            if se > 0.0 {
                worst_sigma = worst_sigma.max((mean - analytic).abs() / se);
            }
        }
    }
    Ok(SuiteResult {
        name: "wick-vs-oracle".into(),
        passed: worst_sigma < 4.0,
        max_error: worst_sigma,
        detail: "worst |analytic − MC| in standard errors".into(),
    })
}

fn suite_symmetry() -> Result<SuiteResult> {
    let mut max_rel = 0.0f64;
    let spec = EnsembleSpec::new(1, 14, Field::Complex, Mode::Critical)?;
    let base = density(&spec, &[c(0.5, 0.4)])?.density;
    for theta in [0.9f64, 2.3] {
        let rot = c(theta.cos(), theta.sin()) * c(0.5, 0.4);
        let d = density(&spec, &[rot])?.density;
        max_rel = max_rel.max((d - base).abs() / base);
    }
    let spec = EnsembleSpec::new(1, 14, Field::Real, Mode::Critical)?;
    let base = density(&spec, &[c(0.5, 0.4)])?.density;
    for z in [c(0.5, -0.4), c(-0.5, -0.4)] {
        let d = density(&spec, &[z])?.density;
        max_rel = max_rel.max((d - base).abs() / base);
    }
    Ok(SuiteResult {
        name: "symmetry".into(),
        passed: max_rel < 1e-10,
        max_error: max_rel,
        detail: "rotation (complex) and conjugation/negation (real) invariance".into(),
    })
}

fn suite_kernel_exactness() -> Result<SuiteResult> {
    let mut max_rel = 0.0f64;
    let z = [c(0.37, -0.61), c(-0.24, 0.45)];
    let zbar: Vec<Complex64> = z.iter().map(|v| v.conj()).collect();
    let s = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
    let n = 8u32;
    let orders = enumerate_multi_indices(2, 2);
    for a in &orders {
        for b in &orders {
            let expr = kernel_partial(a, b, 2)?;
            for w in [&z[..], &zbar[..]] {
                let got = evaluate_normalized(&expr, &z, w, n, s)?;
                let mut want = c(0.0, 0.0);
                for j in enumerate_multi_indices(2, n) {
                    want += multinomial_coeff_f64(n, &j)?
                        * monomial_derivative(&j, a, &z)
                        * monomial_derivative(&j, b, w);
                }
                want /= s.powi(n as i32);
                let scale = want.norm().max(1e-30);
                max_rel = max_rel.max((got - want).norm() / scale);
            }
        }
    }
    Ok(SuiteResult {
        name: "kernel-exactness".into(),
        passed: max_rel < 1e-12,
        max_error: max_rel,
        detail: "symbolic mixed partials vs brute-force multi-index sums".into(),
    })
}

/// Run every suite; `passed` is the conjunction.
pub fn run_all() -> Result<SelfTestReport> {
    let suites = vec![
        suite_closed_form_vs_pipeline()?,
        suite_wick_vs_oracle()?,
        suite_symmetry()?,
        suite_kernel_exactness()?,
    ];
    let passed = suites.iter().all(|s| s.passed);
    Ok(SelfTestReport { suites, passed })
}
