//! Exact symbolic mixed partials of the two-point kernel `S(z,w)^N` with
//! `S = 1 + z·w`, and numerically safe evaluation at `w = z` (pure
//! covariances, real-coefficient case) and `w = z̄` (hermitian covariances,
//! both cases).
//!
//! Every covariance is handled pre-divided by `s_ref^N` with
//! `s_ref = 1 + ‖z‖²`, so the only N-dependent power ever raised is the
//! ratio `r = (1 + z·w)/s_ref` with `|r| ≤ 1`. That keeps N = 10⁶ finite.

use crate::ensemble::{EnsembleSpec, Field, Mode, MultiIndex};
use crate::error::{KrError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// One symbolic term `coeff · N^(k) · z^γ · w^δ · S^{N−k}`, where `N^(k)`
/// is the falling factorial `N(N−1)⋯(N−k+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelTerm {
    /// Integer coefficient; differentiation only multiplies by exponents,
    /// so this stays exact.
    pub coeff: i64,
    /// Falling-factorial order k.
    pub falling: u32,
    /// Exponent vector γ on the z side.
    pub zexp: Vec<u32>,
    /// Exponent vector δ on the w side.
    pub wexp: Vec<u32>,
}

/// Canonicalized sum of [`KernelTerm`]s representing
/// `∂^α_z ∂^β_w S(z,w)^N` for symbolic N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelTermSum {
    m: usize,
    terms: Vec<KernelTerm>,
}

impl KernelTermSum {
    /// The undifferentiated kernel `S^N`.
    pub fn identity(m: usize) -> Self {
        Self {
            m,
            terms: vec![KernelTerm {
                coeff: 1,
                falling: 0,
                zexp: vec![0; m],
                wexp: vec![0; m],
            }],
        }
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    /// Apply `∂/∂z_a` to every term:
    /// `∂_{z_a} z^γ S^{N−k} = γ_a z^{γ−e_a} S^{N−k} + (N−k) w_a z^γ S^{N−k−1}`.
    fn differentiate_z(&self, a: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if t.zexp[a] > 0 {
                let mut zexp = t.zexp.clone();
                zexp[a] -= 1;
                terms.push(KernelTerm {
                    coeff: t.coeff * t.zexp[a] as i64,
                    falling: t.falling,
                    zexp,
                    wexp: t.wexp.clone(),
                });
            }
            let mut wexp = t.wexp.clone();
            wexp[a] += 1;
            terms.push(KernelTerm {
                coeff: t.coeff,
                falling: t.falling + 1,
                zexp: t.zexp.clone(),
                wexp,
            });
        }
        Self { m: self.m, terms }.canonicalized()
    }

    /// Apply `∂/∂w_a`; mirror image of [`Self::differentiate_z`].
    fn differentiate_w(&self, a: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if t.wexp[a] > 0 {
                let mut wexp = t.wexp.clone();
                wexp[a] -= 1;
                terms.push(KernelTerm {
                    coeff: t.coeff * t.wexp[a] as i64,
                    falling: t.falling,
                    zexp: t.zexp.clone(),
                    wexp,
                });
            }
            let mut zexp = t.zexp.clone();
            zexp[a] += 1;
            terms.push(KernelTerm {
                coeff: t.coeff,
                falling: t.falling + 1,
                zexp,
                wexp: t.wexp.clone(),
            });
        }
        Self { m: self.m, terms }.canonicalized()
    }

    /// Merge terms with equal `(k, γ, δ)` keys and drop zero coefficients.
    fn canonicalized(mut self) -> Self {
        self.terms
            .sort_by(|a, b| (a.falling, &a.zexp, &a.wexp).cmp(&(b.falling, &b.zexp, &b.wexp)));
        let mut merged: Vec<KernelTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if let Some(last) = merged.last_mut() {
                if last.falling == t.falling && last.zexp == t.zexp && last.wexp == t.wexp {
                    last.coeff += t.coeff;
                    continue;
                }
            }
            merged.push(t);
        }
        merged.retain(|t| t.coeff != 0);
        Self {
            m: self.m,
            terms: merged,
        }
    }
}

/// Exact symbolic `∂^α_z ∂^β_w S^N` by recursive product-rule
/// differentiation. Orders above 2 per side are outside the covariance
/// blocks this artifact needs and are rejected.
pub fn kernel_partial(alpha: &MultiIndex, beta: &MultiIndex, m: usize) -> Result<KernelTermSum> {
    if alpha.len() != m || beta.len() != m {
        return Err(KrError::DimensionMismatch {
            expected: m,
            got: alpha.len().max(beta.len()),
        });
    }
    if alpha.order() > 2 || beta.order() > 2 {
        return Err(KrError::InvalidArgument(format!(
            "derivative orders ({}, {}) exceed 2 per side",
            alpha.order(),
            beta.order()
        )));
    }
    let mut sum = KernelTermSum::identity(m);
    for (a, &count) in alpha.entries().iter().enumerate() {
        for _ in 0..count {
            sum = sum.differentiate_z(a);
        }
    }
    for (a, &count) in beta.entries().iter().enumerate() {
        for _ in 0..count {
            sum = sum.differentiate_w(a);
        }
    }
    Ok(sum)
}

/// Falling factorial `N(N−1)⋯(N−k+1)` as an exact integer, converted once.
fn falling_factorial(n: u32, k: u32) -> f64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        if i >= n {
            return 0.0;
        }
        acc *= (n - i) as u128;
    }
    acc as f64
}

/// Evaluate a [`KernelTermSum`] divided by `s_ref^N`:
/// `Σ coeff · N^(k) · z^γ w^δ · r^{N−k} / s_ref^k` with
/// `r = (1 + z·w)/s_ref`. The ratio power is computed by repeated squaring,
/// so `|r| ≤ 1` guarantees no overflow for any N.
pub fn evaluate_normalized(
    expr: &KernelTermSum,
    z: &[Complex64],
    w: &[Complex64],
    n: u32,
    s_ref: f64,
) -> Result<Complex64> {
    if z.len() != expr.m || w.len() != expr.m {
        return Err(KrError::DimensionMismatch {
            expected: expr.m,
            got: z.len().min(w.len()),
        });
    }
    if s_ref <= 0.0 {
        return Err(KrError::InvalidArgument("s_ref must be positive".into()));
    }
    let dot: Complex64 = z.iter().zip(w).map(|(a, b)| a * b).sum();
    let r = (Complex64::new(1.0, 0.0) + dot) / s_ref;
    if r.norm() > 1.0 + 1e-12 {
        return Err(KrError::InvalidArgument(format!(
            "|1 + z·w| = {:.6e} exceeds s_ref = {s_ref:.6e}; (z, w) pair invalid",
            (Complex64::new(1.0, 0.0) + dot).norm()
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for t in expr.terms() {
        if t.falling > n {
            continue;
        }
        let mut val = Complex64::new(t.coeff as f64 * falling_factorial(n, t.falling), 0.0);
        for (q, &e) in t.zexp.iter().enumerate() {
            val *= z[q].powu(e);
        }
        for (q, &e) in t.wexp.iter().enumerate() {
            val *= w[q].powu(e);
        }
        val *= r.powu(n - t.falling);
        val /= s_ref.powi(t.falling as i32);
        total += val;
    }
    if !total.re.is_finite() || !total.im.is_finite() {
        return Err(KrError::NonFinite("kernel evaluation".into()));
    }
    Ok(total)
}

/// List of jet observables: derivative multi-indices together with the
/// component each observable belongs to (always component 0 in critical
/// mode). Constraint observables come first, then the reduced derivative
/// slots in (q ≤ p) lexicographic order; the Wick index map relies on this
/// ordering.
#[derive(Debug, Clone)]
pub struct JetLayout {
    /// Derivative multi-index of each observable.
    pub alphas: Vec<MultiIndex>,
    /// Component tag of each observable (zeros mode couples only equal tags).
    pub components: Vec<usize>,
    /// Number of constraint observables (= m).
    pub constraints: usize,
}

/// Build the jet observable layout for a spec.
///
/// Critical mode: `g = (f_1…f_m, (∂f_q/∂z_p)_{q≤p})` with `f_q = ∂h/∂z_q`,
/// so `d = m + m(m+1)/2`. Zeros mode: per component q the jet is
/// `(h_q, ∂h_q/∂z_1…∂h_q/∂z_m)` and components are independent, so
/// `d = m + m²` overall.
pub fn jet_layout(spec: &EnsembleSpec) -> JetLayout {
    let m = spec.m();
    let mut alphas = Vec::new();
    let mut components = Vec::new();
    match spec.mode() {
        Mode::Critical => {
            for q in 0..m {
                alphas.push(MultiIndex::unit(m, q));
                components.push(0);
            }
            for q in 0..m {
                for p in q..m {
                    alphas.push(MultiIndex::unit(m, q).plus(&MultiIndex::unit(m, p)));
                    components.push(0);
                }
            }
        }
        Mode::Zeros => {
            for q in 0..m {
                alphas.push(MultiIndex::zero(m));
                components.push(q);
            }
            for q in 0..m {
                for p in 0..m {
                    alphas.push(MultiIndex::unit(m, p));
                    components.push(q);
                }
            }
        }
    }
    JetLayout {
        alphas,
        components,
        constraints: m,
    }
}

/// Pure (`P = E g gᵀ`) and hermitian (`H = E g g*`) covariances of the full
/// jet observable vector, every entry pre-divided by `s_ref^N`.
#[derive(Debug, Clone)]
pub struct JetCovariance {
    pub layout: JetLayout,
    /// `P[i][j] = E(g_i g_j) / s_ref^N`; exactly zero in the complex field.
    pub pure: DMatrix<Complex64>,
    /// `H[i][j] = E(g_i conj(g_j)) / s_ref^N`; hermitian PSD.
    pub hermitian: DMatrix<Complex64>,
}

/// Evaluate the jet covariances at `z`.
///
/// Hermitian entries come from `kernel_partial` evaluated at `w = z̄`
/// (they coincide for the real and complex fields); pure entries are
/// evaluated at `w = z` and vanish identically for complex coefficients.
pub fn jet_covariances(spec: &EnsembleSpec, z: &[Complex64]) -> Result<JetCovariance> {
    let m = spec.m();
    if z.len() != m {
        return Err(KrError::DimensionMismatch {
            expected: m,
            got: z.len(),
        });
    }
    let layout = jet_layout(spec);
    let d = layout.alphas.len();
    let s_ref = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
    let zbar: Vec<Complex64> = z.iter().map(|v| v.conj()).collect();
    let n = spec.degree();

    let mut hermitian = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let mut pure = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    // Fill i <= j and mirror through the exact relations H[j][i] = conj
    // H[i][j], P[j][i] = P[i][j]; downstream symmetry then holds bit for bit.
    for i in 0..d {
        for j in i..d {
            if layout.components[i] != layout.components[j] {
                continue;
            }
            let expr = kernel_partial(&layout.alphas[i], &layout.alphas[j], m)?;
            let mut h = evaluate_normalized(&expr, z, &zbar, n, s_ref)?;
            if i == j {
                // E|g|² is real; drop the roundoff imaginary part.
                h = Complex64::new(h.re, 0.0);
            }
            hermitian[(i, j)] = h;
            hermitian[(j, i)] = h.conj();
            if spec.field() == Field::Real {
                let p = evaluate_normalized(&expr, z, z, n, s_ref)?;
                pure[(i, j)] = p;
                pure[(j, i)] = p;
            }
        }
    }
    Ok(JetCovariance {
        layout,
        pure,
        hermitian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{enumerate_multi_indices, monomial_derivative, multinomial_coeff_f64};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force oracle: Σ_J binom(N,J) (∂^α z^J)(∂^β w^J) / s_ref^N,
    /// summed over the explicit multi-index list.
    fn brute_force(
        alpha: &MultiIndex,
        beta: &MultiIndex,
        z: &[Complex64],
        w: &[Complex64],
        n: u32,
        s_ref: f64,
    ) -> Complex64 {
        let m = z.len();
        let mut total = c(0.0, 0.0);
        for j in enumerate_multi_indices(m, n) {
            let weight = multinomial_coeff_f64(n, &j).unwrap();
            total += weight * monomial_derivative(&j, alpha, z) * monomial_derivative(&j, beta, w);
        }
        total / s_ref.powi(n as i32)
    }

    #[test]
    fn zeroth_order_is_single_term() {
        let sum = kernel_partial(&MultiIndex::zero(2), &MultiIndex::zero(2), 2).unwrap();
        assert_eq!(sum.terms().len(), 1);
        let t = &sum.terms()[0];
        assert_eq!((t.coeff, t.falling), (1, 0));
        assert!(t.zexp.iter().all(|&e| e == 0) && t.wexp.iter().all(|&e| e == 0));
    }

    #[test]
    fn first_order_cross_term_structure() {
        // m=1: ∂_z ∂_w S^N = N(N−1)·z·w·S^{N−2} + N·S^{N−1}; at z=w=0 it is N.
        let a = MultiIndex::new(vec![1]);
        let sum = kernel_partial(&a, &a, 1).unwrap();
        assert_eq!(sum.terms().len(), 2);
        let zero = [c(0.0, 0.0)];
        for n in [3u32, 10, 47] {
            let v = evaluate_normalized(&sum, &zero, &zero, n, 1.0).unwrap();
            assert!((v - c(n as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn second_order_at_origin() {
        // ∂²_z ∂²_w picks the k=2 binomial term: C(N,2)·(2!)² = 2N(N−1).
        let a = MultiIndex::new(vec![2]);
        let sum = kernel_partial(&a, &a, 1).unwrap();
        let zero = [c(0.0, 0.0)];
        for n in [2u32, 5, 31] {
            let v = evaluate_normalized(&sum, &zero, &zero, n, 1.0).unwrap();
            let expect = 2.0 * n as f64 * (n as f64 - 1.0);
            assert!((v - c(expect, 0.0)).norm() < 1e-9 * (1.0 + expect));
        }
    }

    #[test]
    fn rejects_order_three() {
        let a = MultiIndex::new(vec![3]);
        assert!(kernel_partial(&a, &MultiIndex::zero(1), 1).is_err());
    }

    #[test]
    fn hermitian_point_has_unit_ratio() {
        // w = z̄ makes r = 1 exactly; the result is a plain polynomial value.
        let a = MultiIndex::new(vec![1, 0]);
        let b = MultiIndex::new(vec![0, 1]);
        let sum = kernel_partial(&a, &b, 2).unwrap();
        let z = [c(0.3, 0.4), c(-0.2, 0.1)];
        let zbar: Vec<_> = z.iter().map(|v| v.conj()).collect();
        let s = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let v = evaluate_normalized(&sum, &z, &zbar, 9, s).unwrap();
        let oracle = brute_force(&a, &b, &z, &zbar, 9, s);
        assert!((v - oracle).norm() <= 1e-12 * oracle.norm().max(1.0));
    }

    #[test]
    fn normalized_evaluation_decays_at_pure_point() {
        // m=1, α=β=(1), z = i/2, w = z: r = 0.6, result decays with N.
        let a = MultiIndex::new(vec![1]);
        let sum = kernel_partial(&a, &a, 1).unwrap();
        let z = [c(0.0, 0.5)];
        let s = 1.25;
        // Derived by direct evaluation at N = 6.
        let v6 = evaluate_normalized(&sum, &z, &z, 6, s).unwrap();
        assert!((v6 - c(-0.248832, 0.0)).norm() < 1e-12);
        for n in [10u32, 20, 40] {
            let v = evaluate_normalized(&sum, &z, &z, n, s).unwrap();
            let nf = n as f64;
            let bound = (nf * nf + nf) * 0.6f64.powi(n as i32 - 2) / (s * s);
            assert!(
                v.norm() <= bound * (1.0 + 1e-12),
                "N={n}: {} > {bound}",
                v.norm()
            );
        }
    }

    #[test]
    fn huge_degree_is_finite() {
        let a = MultiIndex::new(vec![2]);
        let sum = kernel_partial(&a, &a, 1).unwrap();
        let z = [c(0.0, 0.5)];
        let v = evaluate_normalized(&sum, &z, &z, 1_000_000, 1.25).unwrap();
        assert!(v.norm().is_finite());
        // |r| < 1 with a million-fold exponent underflows to zero.
        assert!(v.norm() < 1e-100);
        let zbar = [c(0.0, -0.5)];
        let h = evaluate_normalized(&sum, &z, &zbar, 1_000_000, 1.25).unwrap();
        assert!(h.norm().is_finite());
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let sum = KernelTermSum::identity(1);
        // |1 + z·w| > s_ref signals a caller bug.
        let err = evaluate_normalized(&sum, &[c(2.0, 0.0)], &[c(2.0, 0.0)], 4, 1.0);
        assert!(err.is_err());
    }

    #[test]
    fn analytic_matches_brute_force_all_orders() {
        // Exactness sweep: every (α, β) with orders ≤ 2 per side, m ≤ 3,
        // a representative degree, random-ish fixed points.
        let points = [
            vec![c(0.37, -0.61)],
            vec![c(0.37, -0.61), c(-0.24, 0.45)],
            vec![c(0.37, -0.61), c(-0.24, 0.45), c(0.11, 0.29)],
        ];
        for (mi, z) in points.iter().enumerate() {
            let m = mi + 1;
            let s = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
            let zbar: Vec<_> = z.iter().map(|v| v.conj()).collect();
            let orders: Vec<MultiIndex> = enumerate_multi_indices(m, 2);
            for n in [4u32, 9] {
                for a in &orders {
                    for b in &orders {
                        let expr = kernel_partial(a, b, m).unwrap();
                        for w in [&z[..], &zbar[..]] {
                            let got = evaluate_normalized(&expr, z, w, n, s).unwrap();
                            let want = brute_force(a, b, z, w, n, s);
                            let scale = want.norm().max(1e-30);
                            assert!(
                                (got - want).norm() / scale < 1e-12,
                                "m={m} N={n} α={a:?} β={b:?}: {got} vs {want}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn jet_covariance_critical_complex_origin() {
        // H = diag(N, 2N(N−1)) at z = 0, P = 0.
        let spec = EnsembleSpec::new(1, 10, Field::Complex, Mode::Critical).unwrap();
        let jc = jet_covariances(&spec, &[c(0.0, 0.0)]).unwrap();
        assert_eq!(jc.hermitian.nrows(), 2);
        assert!((jc.hermitian[(0, 0)] - c(10.0, 0.0)).norm() < 1e-12);
        assert!((jc.hermitian[(1, 1)] - c(180.0, 0.0)).norm() < 1e-9);
        assert!(jc.hermitian[(0, 1)].norm() < 1e-12);
        assert!(jc.pure.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn jet_covariance_critical_real_origin() {
        // Real coefficients at the origin: E(ff) = E(f f̄).
        let spec = EnsembleSpec::new(1, 10, Field::Real, Mode::Critical).unwrap();
        let jc = jet_covariances(&spec, &[c(0.0, 0.0)]).unwrap();
        assert!((jc.pure[(0, 0)] - c(10.0, 0.0)).norm() < 1e-12);
        assert!((jc.pure[(1, 1)] - c(180.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn hermitian_part_is_field_independent() {
        // Same code path for both fields: structural equality, bit for bit.
        let z = [c(0.3, 0.7), c(-0.5, 0.2)];
        for mode in [Mode::Critical, Mode::Zeros] {
            let real = EnsembleSpec::new(2, 8, Field::Real, mode).unwrap();
            let cx = EnsembleSpec::new(2, 8, Field::Complex, mode).unwrap();
            let h_real = jet_covariances(&real, &z).unwrap().hermitian;
            let h_cx = jet_covariances(&cx, &z).unwrap().hermitian;
            assert_eq!(h_real, h_cx);
        }
    }

    #[test]
    fn jet_covariance_matches_brute_force_m2() {
        let spec = EnsembleSpec::new(2, 6, Field::Real, Mode::Critical).unwrap();
        let z = [c(0.42, -0.17), c(0.05, 0.64)];
        let zbar: Vec<_> = z.iter().map(|v| v.conj()).collect();
        let s = 1.0 + z.iter().map(|v| v.norm_sqr()).sum::<f64>();
        let jc = jet_covariances(&spec, &z).unwrap();
        let layout = jet_layout(&spec);
        for i in 0..layout.alphas.len() {
            for j in 0..layout.alphas.len() {
                let want_h = brute_force(&layout.alphas[i], &layout.alphas[j], &z, &zbar, 6, s);
                let want_p = brute_force(&layout.alphas[i], &layout.alphas[j], &z, &z, 6, s);
                let scale = want_h.norm().max(1e-30);
                assert!((jc.hermitian[(i, j)] - want_h).norm() / scale < 1e-12);
                let scale = want_p.norm().max(1e-30);
                assert!((jc.pure[(i, j)] - want_p).norm() / scale < 1e-12);
            }
        }
    }

    #[test]
    fn pure_block_decays_at_lambda_rate() {
        // Off the real locus every pure-covariance entry is bounded by
        // poly(N)·e^{−λ_z(N−2)}. The largest entry is the Hessian/Hessian
        // one with falling-factorial order 4, so after an N⁴ compensation
        // the fitted decay recovers λ_z itself.
        let z = [c(0.4, 0.3)];
        let lam = crate::kacrice::lambda_z(&z);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        let mut bound_k = 0.0f64;
        for n in (10..=40u32).step_by(2) {
            let spec = EnsembleSpec::new(1, n, Field::Real, Mode::Critical).unwrap();
            let jc = jet_covariances(&spec, &z).unwrap();
            let max_p = jc.pure.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
            let poly = (n as f64).powi(4);
            if n == 10 {
                bound_k = 2.0 * max_p / (poly * (-lam * (n as f64 - 2.0)).exp());
            }
            assert!(
                max_p <= bound_k * poly * (-lam * (n as f64 - 2.0)).exp(),
                "N={n}: |P| = {max_p:.3e} violates the poly(N)·e^(-λ(N-2)) envelope"
            );
            xs.push(n as f64);
            ys.push((max_p / poly).ln());
        }
        let (slope, _) = crate::kacrice::least_squares_line(&xs, &ys).unwrap();
        let rate = -slope;
        assert!(
            (rate - lam).abs() < 0.15 * lam,
            "pure block rate {rate} vs λ_z {lam}"
        );
    }

    #[test]
    fn hermitian_is_psd() {
        // Min eigenvalue of the real embedding ≥ −1e−10 · trace.
        use nalgebra::SymmetricEigen;
        for (spec, z) in [
            (
                EnsembleSpec::new(2, 9, Field::Complex, Mode::Critical).unwrap(),
                vec![c(0.3, 0.8), c(-1.1, 0.4)],
            ),
            (
                EnsembleSpec::new(3, 5, Field::Real, Mode::Zeros).unwrap(),
                vec![c(0.3, 0.8), c(-1.1, 0.4), c(0.0, -0.6)],
            ),
        ] {
            let jc = jet_covariances(&spec, &z).unwrap();
            let d = jc.hermitian.nrows();
            let mut emb = DMatrix::zeros(2 * d, 2 * d);
            for i in 0..d {
                for j in 0..d {
                    let v = jc.hermitian[(i, j)];
                    emb[(i, j)] = v.re;
                    emb[(i, d + j)] = -v.im;
                    emb[(d + i, j)] = v.im;
                    emb[(d + i, d + j)] = v.re;
                }
            }
            let trace = emb.trace();
            let eig = SymmetricEigen::new(emb);
            let min = eig.eigenvalues.min();
            assert!(min >= -1e-10 * trace, "min eig {min} vs trace {trace}");
        }
    }
}
