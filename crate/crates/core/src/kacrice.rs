//! Full density pipeline: jet covariances → real blocks → Schur complement
//! → Wick expectation → expected point density, plus the real/complex ratio
//! and the exponential decay-rate analysis.

use crate::ensemble::{EnsembleSpec, Field, Mode};
use crate::error::{KrError, Result};
use crate::kernel::{jet_covariances, JetCovariance};
use crate::realcov::{assemble_blocks, factor_constraint_block, schur_lambda_with};
use crate::wick::{build_xi_map, wick_det_expectation};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// Density value with numerical diagnostics.
#[derive(Debug, Clone)]
pub struct DensityResult {
    /// Expected points per unit Lebesgue area of ℂ^m at z.
    pub density: f64,
    /// Determinant of the (normalized) constraint block.
    pub det_a: f64,
    /// Condition estimate of Λ.
    pub lambda_cond: f64,
    /// Net power of s_ref divided out across the pipeline; must be zero.
    pub normalization_degree: i64,
}

/// Result of fitting the exponential decay of the real/complex density gap.
#[derive(Debug, Clone)]
pub struct DecayFit {
    /// Negated least-squares slope of log|gap| vs N over the upper envelope.
    pub fitted_rate: f64,
    /// λ_z from the closed formula.
    pub theoretical_rate: f64,
    /// Number of degree samples in the sweep (at least 5).
    pub n_points: usize,
    /// RMS residual of the envelope fit.
    pub residual: f64,
}

/// Expected density of the spec's point process at z.
///
/// All covariances enter pre-divided by `s_ref^N`; the prefactor
/// `(det A)^{−1/2}` then contributes `s_ref^{+Nm}` and the degree-m
/// homogeneous Wick expectation contributes `s_ref^{−Nm}`, so the result
/// needs no un-normalization. The audit field records that the powers net
/// to zero.
pub fn density(spec: &EnsembleSpec, z: &[Complex64]) -> Result<DensityResult> {
    let jet = jet_covariances(spec, z)?;
    density_from_jet(&jet, spec, z)
}

/// Pipeline tail starting from precomputed jet covariances. Split out so
/// scale-invariance can be exercised directly.
pub fn density_from_jet(
    jet: &JetCovariance,
    spec: &EnsembleSpec,
    z: &[Complex64],
) -> Result<DensityResult> {
    let m = spec.m();
    let blocks = assemble_blocks(jet, spec);
    let factor = factor_constraint_block(&blocks.a).map_err(|e| match e {
        KrError::DegenerateCovariance(detail) => {
            KrError::DegenerateCovariance(format!("{detail} at z = {z:?}"))
        }
        other => other,
    })?;
    let lambda = schur_lambda_with(&blocks, &factor);

    let eig = SymmetricEigen::new(lambda.clone());
    let lmax: f64 = eig.eigenvalues.max();
    let lmin: f64 = eig.eigenvalues.min();
    let lambda_cond = if lmin > 0.0 {
        lmax / lmin
    } else {
        f64::INFINITY
    };

    let map = build_xi_map(m, spec.mode());
    let e_det = wick_det_expectation(&lambda, &map)?;
    let scale = (lambda.trace() / lambda.nrows() as f64).powi(m as i32);
    if e_det < -1e-10 * scale {
        return Err(KrError::NonFinite(format!(
            "Wick expectation {e_det:.3e} significantly negative at z = {z:?}"
        )));
    }

    let n = spec.degree() as i64;
    // (det A)^{-1/2} of the s_ref^{-N}-scaled block contributes s_ref^{+Nm};
    // the degree-m homogeneity of E[det ξ] in Λ contributes s_ref^{-Nm}.
    let shift_from_det_a = n * m as i64;
    let shift_from_wick = -(n * m as i64);
    let normalization_degree = shift_from_det_a + shift_from_wick;
    debug_assert_eq!(normalization_degree, 0);

    let prefactor = (2.0 * std::f64::consts::PI).powi(-(m as i32));
    let density = prefactor * e_det.max(0.0) / factor.det_a.sqrt();
    if !density.is_finite() {
        return Err(KrError::NonFinite(format!("density at z = {z:?}")));
    }
    Ok(DensityResult {
        density,
        det_a: factor.det_a,
        lambda_cond,
        normalization_degree,
    })
}

/// Real-field density over complex-field density at identical (m, N, mode, z).
pub fn density_ratio(m: usize, degree: u32, mode: Mode, z: &[Complex64]) -> Result<f64> {
    let real = density(&EnsembleSpec::new(m, degree, Field::Real, mode)?, z)?;
    let cx = density(&EnsembleSpec::new(m, degree, Field::Complex, mode)?, z)?;
    Ok(real.density / cx.density)
}

/// Exponential rate `λ_z = −log |(1 + z·z)/(1 + ‖z‖²)|`.
///
/// Zero exactly on the locus `|1 + z·z| = 1 + ‖z‖²` (containing ℝ^m) and
/// +∞ where `1 + z·z = 0`.
pub fn lambda_z(z: &[Complex64]) -> f64 {
    let dot: Complex64 = z.iter().map(|v| v * v).sum();
    let s: f64 = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
    let num = (Complex64::new(1.0, 0.0) + dot).norm();
    if num == 0.0 {
        return f64::INFINITY;
    }
    (-(num / s).ln()).max(0.0)
}

/// Gap samples feeding a decay fit: (N, |density_real − density_cx|).
pub fn decay_gaps(
    m: usize,
    mode: Mode,
    z: &[Complex64],
    degrees: &[u32],
) -> Result<Vec<(u32, f64)>> {
    degrees
        .iter()
        .map(|&n| {
            let real = density(&EnsembleSpec::new(m, n, Field::Real, mode)?, z)?;
            let cx = density(&EnsembleSpec::new(m, n, Field::Complex, mode)?, z)?;
            Ok((n, (real.density - cx.density).abs()))
        })
        .collect()
}

/// Fit the decay rate of the real/complex density gap over a degree sweep.
///
/// The gap oscillates in sign with N, so the fit runs over the upper
/// envelope: non-overlapping windows of 3 consecutive degrees, keeping the
/// largest gap in each window, then least squares of log gap vs N.
pub fn decay_rate_fit(m: usize, mode: Mode, z: &[Complex64], degrees: &[u32]) -> Result<DecayFit> {
    if degrees.len() < 5 {
        return Err(KrError::InvalidArgument(
            "decay fit needs at least 5 degrees".into(),
        ));
    }
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KrError::InvalidArgument(
            "degree list must be increasing".into(),
        ));
    }
    let gaps = decay_gaps(m, mode, z, degrees)?;
    let floor = {
        let max_cx = degrees
            .iter()
            .map(|&n| {
                density(&EnsembleSpec::new(m, n, Field::Complex, mode)?, z).map(|d| d.density)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        1e-14 * max_cx
    };
    if gaps.iter().all(|&(_, g)| g < floor) {
        return Err(KrError::RateUnresolvable(format!(
            "all gaps below {floor:.3e}; z too far from the real locus for this degree range"
        )));
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for window in gaps.chunks(3) {
        let &(n_at, g_at) = window
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty window");
        if g_at > 0.0 {
            xs.push(n_at as f64);
            ys.push(g_at.ln());
        }
    }
    let (slope, residual) = least_squares_line(&xs, &ys)?;
    Ok(DecayFit {
        fitted_rate: -slope,
        theoretical_rate: lambda_z(z),
        n_points: degrees.len(),
        residual,
    })
}

/// Least-squares slope of y against x; returns (slope, rms residual).
pub fn least_squares_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(KrError::InvalidArgument(
            "need at least 2 points for a line".into(),
        ));
    }
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 {
        return Err(KrError::InvalidArgument("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let resid = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / n;
    Ok((slope, resid.sqrt()))
}
