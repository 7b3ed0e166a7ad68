//! Empirical oracle for the one-variable densities: sample SO(2)/SU(2)
//! polynomials, locate their critical points (roots of h′) or zeros with a
//! simultaneous root iteration, pool them into spatial histograms, and
//! compare the counts against analytic densities with Poisson z-scores.

use crate::ensemble::{
    enumerate_multi_indices, multinomial_coeff_f64, sample_coefficients, EnsembleSpec, Mode,
};
use crate::error::{KrError, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Maximum Aberth sweeps before a sample is declared failed.
const MAX_SWEEPS: usize = 500;
/// Convergence: max correction below `1e-12·(1 + |root|)`.
const CONVERGENCE_REL: f64 = 1e-12;

/// All roots of one polynomial with backward-error residuals.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)| / Σ_k |c_k||root|^k` per root; converged samples sit near
    /// machine precision.
    pub residuals: Vec<f64>,
}

/// Find all complex roots by Aberth–Ehrlich simultaneous iteration.
///
/// Coefficients run low to high degree. Initial points sit on a circle with
/// the smaller of the Cauchy and Fujiwara coefficient-magnitude radii, with
/// an angular offset to break symmetry.
pub fn aberth_roots(coeffs: &[Complex64]) -> Result<RootSet> {
    if coeffs.len() < 2 {
        return Err(KrError::InvalidArgument(
            "polynomial must have degree >= 1".into(),
        ));
    }
    let degree = coeffs.len() - 1;
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let lead = coeffs[degree].norm();
    if lead <= 1e-12 * max_coeff {
        return Err(KrError::InvalidArgument(
            "leading coefficient too small relative to the coefficient scale".into(),
        ));
    }

    // Cauchy: 1 + max |c_k/c_d|; Fujiwara: 2·max |c_{d−k}/c_d|^{1/k}.
    let cauchy = 1.0
        + coeffs[..degree]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0f64, f64::max);
    let fujiwara = 2.0
        * (1..=degree)
            .map(|k| (coeffs[degree - k].norm() / lead).powf(1.0 / k as f64))
            .fold(0.0f64, f64::max);
    let radius = cauchy.min(fujiwara).max(1e-9);

    let mut roots: Vec<Complex64> = (0..degree)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / degree as f64 + 0.45;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let eval = |z: Complex64| -> (Complex64, Complex64) {
        // Horner for p and p' together.
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };

    let mut converged = false;
    let mut sweeps = 0;
    let mut max_correction = f64::INFINITY;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        max_correction = 0.0;
        for i in 0..degree {
            let zi = roots[i];
            let (p, dp) = eval(zi);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                Complex64::new(1e-3, 1e-3)
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    let diff = zi - zj;
                    if diff.norm() > 0.0 {
                        repulsion += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let correction = if denom.norm() > 0.0 {
                newton / denom
            } else {
                newton
            };
            roots[i] = zi - correction;
            let rel = correction.norm() / (1.0 + roots[i].norm());
            if rel > max_correction {
                max_correction = rel;
            }
        }
        if max_correction < CONVERGENCE_REL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(KrError::RootFindFailure {
            sweeps,
            max_correction,
        });
    }

    let residuals = roots
        .iter()
        .map(|&z| {
            let (p, _) = eval(z);
            let mut scale = 0.0;
            let mut pw = 1.0;
            for c in coeffs {
                scale += c.norm() * pw;
                pw *= z.norm();
            }
            p.norm() / scale.max(1e-300)
        })
        .collect();
    Ok(RootSet { roots, residuals })
}

/// A pooled sampling run: accepted root sets plus failure accounting.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub accepted: Vec<RootSet>,
    pub n_failed: usize,
    pub n_requested: usize,
}

impl SampleRun {
    pub fn failure_rate(&self) -> f64 {
        self.n_failed as f64 / self.n_requested.max(1) as f64
    }
}

/// Coefficients of the polynomial whose roots realize the spec's point
/// process: h itself in zeros mode, h′ in critical mode (m = 1 only).
fn target_polynomial(spec: &EnsembleSpec, sample_coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = spec.degree();
    let indices = enumerate_multi_indices(1, n);
    let weighted: Vec<Complex64> = indices
        .iter()
        .zip(sample_coeffs)
        .map(|(idx, c)| c * multinomial_coeff_f64(n, idx).expect("|J| <= N").sqrt())
        .collect();
    match spec.mode() {
        Mode::Zeros => weighted,
        Mode::Critical => (1..weighted.len())
            .map(|k| weighted[k] * k as f64)
            .collect(),
    }
}

/// Sample the ensemble and root-find each draw; critical mode locates the
/// zeros of h′ (exactly N−1 points per accepted sample), zeros mode the
/// zeros of h itself (N points). m = 1 only.
///
/// Samples are drawn on independent per-index rng streams, so results do
/// not depend on worker count. Failed root searches are discarded and
/// counted; a failure rate of 0.1% aborts the run.
pub fn sample_roots(spec: &EnsembleSpec, n_samples: usize, seed: u64) -> Result<SampleRun> {
    if spec.m() != 1 {
        return Err(KrError::InvalidArgument(
            "empirical sampling covers m = 1 only".into(),
        ));
    }
    let outcomes: Vec<Result<RootSet>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let draw = sample_coefficients(spec, &mut rng);
            let poly = target_polynomial(spec, &draw.components[0].values);
            aberth_roots(&poly)
        })
        .collect();

    let mut accepted = Vec::with_capacity(n_samples);
    let mut n_failed = 0;
    for outcome in outcomes {
        match outcome {
            Ok(set) => accepted.push(set),
            Err(KrError::RootFindFailure { .. }) | Err(KrError::InvalidArgument(_)) => {
                n_failed += 1
            }
            Err(other) => return Err(other),
        }
    }
    let run = SampleRun {
        accepted,
        n_failed,
        n_requested: n_samples,
    };
    if run.failure_rate() >= 0.001 {
        return Err(KrError::ExcessiveFailureRate {
            n_failed: run.n_failed,
            n_requested: run.n_requested,
        });
    }
    Ok(run)
}

/// Rectangular window of ℂ.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

/// Pooled spatial histogram with per-cell expected counts.
#[derive(Debug, Clone)]
pub struct EmpiricalHistogram {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    /// Row-major cell counts (re index fast).
    pub counts: Vec<u64>,
    /// Per-sample expected count per cell (∫ density over the cell).
    pub expected: Vec<f64>,
    /// Cells excluded from comparison (near-axis band for the real field).
    pub excluded: Vec<bool>,
    pub n_samples: usize,
}

impl EmpiricalHistogram {
    pub fn cell_index(&self, z: Complex64) -> Option<usize> {
        let w = &self.window;
        if z.re < w.re_lo || z.re >= w.re_hi || z.im < w.im_lo || z.im >= w.im_hi {
            return None;
        }
        let fx = (z.re - w.re_lo) / (w.re_hi - w.re_lo) * self.nx as f64;
        let fy = (z.im - w.im_lo) / (w.im_hi - w.im_lo) * self.ny as f64;
        let ix = (fx as usize).min(self.nx - 1);
        let iy = (fy as usize).min(self.ny - 1);
        Some(iy * self.nx + ix)
    }

    pub fn cell_bounds(&self, cell: usize) -> Window {
        let ix = cell % self.nx;
        let iy = cell / self.nx;
        let dx = (self.window.re_hi - self.window.re_lo) / self.nx as f64;
        let dy = (self.window.im_hi - self.window.im_lo) / self.ny as f64;
        Window {
            re_lo: self.window.re_lo + ix as f64 * dx,
            re_hi: self.window.re_lo + (ix + 1) as f64 * dx,
            im_lo: self.window.im_lo + iy as f64 * dy,
            im_hi: self.window.im_lo + (iy + 1) as f64 * dy,
        }
    }
}

/// Integrate a density over a cell by midpoint refinement, doubling the
/// grid until successive estimates agree to the relative tolerance.
pub fn integrate_cell<F: Fn(Complex64) -> f64>(density: &F, cell: &Window, rel_tol: f64) -> f64 {
    let mut k = 2usize;
    let mut prev = f64::NAN;
    loop {
        let dx = (cell.re_hi - cell.re_lo) / k as f64;
        let dy = (cell.im_hi - cell.im_lo) / k as f64;
        let mut sum = 0.0;
        for i in 0..k {
            for j in 0..k {
                let z = Complex64::new(
                    cell.re_lo + (i as f64 + 0.5) * dx,
                    cell.im_lo + (j as f64 + 0.5) * dy,
                );
                sum += density(z);
            }
        }
        let estimate = sum * dx * dy;
        if !prev.is_nan() && (estimate - prev).abs() <= rel_tol * estimate.abs().max(1e-300) {
            return estimate;
        }
        prev = estimate;
        if k >= 64 {
            return estimate;
        }
        k *= 2;
    }
}

/// Build the pooled histogram for a sampling run and fill expected counts
/// from an analytic density. Cells whose closure meets the excluded band
/// `|Im z| < exclude_im` are flagged and skipped in comparisons.
pub fn build_histogram<F: Fn(Complex64) -> f64>(
    run: &SampleRun,
    window: Window,
    nx: usize,
    ny: usize,
    density: &F,
    exclude_im: f64,
) -> EmpiricalHistogram {
    let mut hist = EmpiricalHistogram {
        window,
        nx,
        ny,
        counts: vec![0; nx * ny],
        expected: vec![0.0; nx * ny],
        excluded: vec![false; nx * ny],
        n_samples: run.accepted.len(),
    };
    for set in &run.accepted {
        for &root in &set.roots {
            if let Some(cell) = hist.cell_index(root) {
                hist.counts[cell] += 1;
            }
        }
    }
    for cell in 0..nx * ny {
        let bounds = hist.cell_bounds(cell);
        let touches_band = bounds.im_lo < exclude_im && bounds.im_hi > -exclude_im;
        if exclude_im > 0.0 && touches_band {
            hist.excluded[cell] = true;
            continue;
        }
        hist.expected[cell] = integrate_cell(density, &bounds, 1e-4);
    }
    hist
}

/// Per-cell comparison row.
#[derive(Debug, Clone)]
pub struct CellComparison {
    pub bounds: Window,
    pub count: u64,
    /// Total expected count n_samples·μ.
    pub expected: f64,
    /// `(count − nμ)/sqrt(nμ)`, with the empty-cell 0/0 convention → 0.
    pub z_score: f64,
    pub excluded: bool,
}

/// Histogram comparison summary.
#[derive(Debug, Clone)]
pub struct HistogramComparison {
    pub cells: Vec<CellComparison>,
    /// Fraction of non-excluded cells with |z| > 3.
    pub fraction_bad: f64,
    pub max_abs_z: f64,
    pub n_excluded: usize,
}

/// Poisson-normalized z-scores per cell and their summary.
pub fn compare_histogram(hist: &EmpiricalHistogram) -> HistogramComparison {
    let mut cells = Vec::with_capacity(hist.counts.len());
    let mut bad = 0usize;
    let mut included = 0usize;
    let mut max_abs_z = 0.0f64;
    let mut n_excluded = 0usize;
    for cell in 0..hist.counts.len() {
        let mu_total = hist.expected[cell] * hist.n_samples as f64;
        let count = hist.counts[cell];
        let z_score = if hist.excluded[cell] {
            0.0
        } else if mu_total > 0.0 {
            (count as f64 - mu_total) / mu_total.sqrt()
        } else {
            0.0
        };
        if hist.excluded[cell] {
            n_excluded += 1;
        } else {
            included += 1;
            if z_score.abs() > 3.0 {
                bad += 1;
            }
            max_abs_z = max_abs_z.max(z_score.abs());
        }
        cells.push(CellComparison {
            bounds: hist.cell_bounds(cell),
            count,
            expected: mu_total,
            z_score,
            excluded: hist.excluded[cell],
        });
    }
    HistogramComparison {
        cells,
        fraction_bad: bad as f64 / included.max(1) as f64,
        max_abs_z,
        n_excluded,
    }
}
