//! Conversion of complex jet covariances (P, H) to the real covariance
//! blocks A, B, C of the joint Gaussian vector (X, ξ̂), and the Schur
//! complement Λ = C − BᵀA⁻¹B that conditions the derivative jet on the
//! constraint functions vanishing.
//!
//! Real layout convention throughout: real parts of all slots first, then
//! imaginary parts, i.e. X = (f^r_1…f^r_m, f^i_1…f^i_m) and likewise for ξ̂.

use crate::ensemble::EnsembleSpec;
use crate::error::{KrError, Result};
use crate::kernel::JetCovariance;
use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;

/// Relative eigenvalue threshold below which the constraint block A counts
/// as degenerate. Chosen to fail loudly near the real locus instead of
/// returning noise.
pub const CONDITION_THRESHOLD: f64 = 1e12;

/// Real covariance blocks of Δ = [[A, B], [Bᵀ, C]].
#[derive(Debug, Clone)]
pub struct CovarianceBlocks {
    /// 2m×2m constraint block.
    pub a: DMatrix<f64>,
    /// 2m×2d cross block.
    pub b: DMatrix<f64>,
    /// 2d×2d derivative block.
    pub c: DMatrix<f64>,
    /// Reduced complex derivative count d (d_m in critical mode, m² in
    /// zeros mode).
    pub d: usize,
}

/// Real 2×2 covariance of (u^r, u^i) against (v^r, v^i) from the pure
/// covariance `P = E(uv)` and hermitian covariance `H = E(u v̄)`:
///
/// ```text
/// E(u^r v^r) = ½ Re(P + H)        E(u^r v^i) = ½ Im(P) − ½ Im(H)
/// E(u^i v^r) = ½ Im(P) + ½ Im(H)  E(u^i v^i) = ½ Re(H − P)
/// ```
pub fn complex_to_real_cov(p: Complex64, h: Complex64) -> Matrix2<f64> {
    Matrix2::new(
        0.5 * (p.re + h.re),
        0.5 * p.im - 0.5 * h.im,
        0.5 * p.im + 0.5 * h.im,
        0.5 * (h.re - p.re),
    )
}

/// Assemble A, B, C from the jet covariances, honoring the jet ordering
/// contract (constraints first, then reduced derivative slots).
pub fn assemble_blocks(jetcov: &JetCovariance, spec: &EnsembleSpec) -> CovarianceBlocks {
    let m = spec.m();
    let total = jetcov.layout.alphas.len();
    let nc = jetcov.layout.constraints;
    debug_assert_eq!(nc, m);
    let nd = total - nc;

    let mut a = DMatrix::zeros(2 * nc, 2 * nc);
    let mut b = DMatrix::zeros(2 * nc, 2 * nd);
    let mut c = DMatrix::zeros(2 * nd, 2 * nd);

    let blk =
        |i: usize, j: usize| complex_to_real_cov(jetcov.pure[(i, j)], jetcov.hermitian[(i, j)]);

    for i in 0..nc {
        for j in 0..nc {
            let t = blk(i, j);
            a[(i, j)] = t[(0, 0)];
            a[(i, nc + j)] = t[(0, 1)];
            a[(nc + i, j)] = t[(1, 0)];
            a[(nc + i, nc + j)] = t[(1, 1)];
        }
        for j in 0..nd {
            let t = blk(i, nc + j);
            b[(i, j)] = t[(0, 0)];
            b[(i, nd + j)] = t[(0, 1)];
            b[(nc + i, j)] = t[(1, 0)];
            b[(nc + i, nd + j)] = t[(1, 1)];
        }
    }
    for i in 0..nd {
        for j in 0..nd {
            let t = blk(nc + i, nc + j);
            c[(i, j)] = t[(0, 0)];
            c[(i, nd + j)] = t[(0, 1)];
            c[(nd + i, j)] = t[(1, 0)];
            c[(nd + i, nd + j)] = t[(1, 1)];
        }
    }
    CovarianceBlocks { a, b, c, d: nd }
}

/// Eigen-analysis of the constraint block used both for the degeneracy
/// check and the density prefactor.
pub struct ConstraintFactor {
    pub det_a: f64,
    /// λ_max/λ_min relative to the mean eigenvalue scale.
    pub cond_a: f64,
    a_inv: DMatrix<f64>,
}

/// Factor A, rejecting matrices whose smallest eigenvalue is below
/// `trace/(2m) / CONDITION_THRESHOLD` (the real-locus degeneracy).
pub fn factor_constraint_block(a: &DMatrix<f64>) -> Result<ConstraintFactor> {
    let n = a.nrows();
    let scale = a.trace() / n as f64;
    if !scale.is_finite() || scale <= 0.0 {
        return Err(KrError::DegenerateCovariance(format!(
            "constraint block trace {scale:.3e} is not positive"
        )));
    }
    let eig = SymmetricEigen::new(a.clone());
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if min <= scale / CONDITION_THRESHOLD {
        return Err(KrError::DegenerateCovariance(format!(
            "constraint block near-singular: min eigenvalue {min:.3e} vs scale {scale:.3e} \
             (real locus)"
        )));
    }
    let det_a = eig.eigenvalues.iter().product();
    let cond_a = max / min;
    // A = Q D Qᵀ  ⇒  A⁻¹ = Q D⁻¹ Qᵀ
    let q = eig.eigenvectors;
    let dinv = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v));
    let a_inv = &q * dinv * q.transpose();
    Ok(ConstraintFactor {
        det_a,
        cond_a,
        a_inv,
    })
}

/// Schur complement Λ = C − BᵀA⁻¹B, symmetrized to remove roundoff skew.
pub fn schur_lambda(blocks: &CovarianceBlocks) -> Result<DMatrix<f64>> {
    let factor = factor_constraint_block(&blocks.a)?;
    Ok(schur_lambda_with(blocks, &factor))
}

/// Schur complement reusing an existing factorization of A.
pub fn schur_lambda_with(blocks: &CovarianceBlocks, factor: &ConstraintFactor) -> DMatrix<f64> {
    let lambda = &blocks.c - blocks.b.transpose() * &factor.a_inv * &blocks.b;
    0.5 * (&lambda + lambda.transpose())
}
