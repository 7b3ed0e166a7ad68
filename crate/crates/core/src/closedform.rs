//! The explicit one-variable formulas: exact critical-point densities for
//! both ensembles, the error term separating them, scaling limits, the
//! near-real-line slope, and the zero-density formula for all m.

use crate::error::{KrError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Scaling-limit density split into its complex-ensemble part and the
/// real-ensemble correction.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDensity {
    /// Total value; always `component_cx + component_err`.
    pub value: f64,
    pub component_cx: f64,
    pub component_err: f64,
}

/// Exact density of complex critical points of the degree-N complex
/// (SU(2)) random polynomial:
/// `(N/π)(1/(1+|z|²)² − 2/(N(1+|z|²)²) + 1/(1+N|z|²)²)`.
pub fn su2_crit_density(n: u32, z: Complex64) -> f64 {
    let nf = n as f64;
    let a = 1.0 + z.norm_sqr();
    let b = 1.0 + nf * z.norm_sqr();
    (nf / PI) * (1.0 / (a * a) - 2.0 / (nf * a * a) + 1.0 / (b * b))
}

/// Density of complex zeros of the m-component complex (SU(m+1)) system:
/// `m! N^m / (π^m (1+‖z‖²)^{m+1})`.
///
/// The m! coefficient makes the total mass Bézout's N^m; for m ≤ 2 it
/// coincides with m.
pub fn su_zero_density(m: usize, n: u32, z: &[Complex64]) -> f64 {
    assert_eq!(z.len(), m);
    let norm2: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    let mut coeff = 1.0;
    for k in 1..=m {
        coeff *= k as f64;
    }
    coeff * (n as f64).powi(m as i32) / PI.powi(m as i32) / (1.0 + norm2).powi(m as i32 + 1)
}

/// log |Q_N(z)| computed entirely in log space so N = 10⁶ cannot overflow:
/// `log|N²z²+N| − log(N²|z|²+N) + (N−2)(log|1+z²| − log(1+|z|²))`.
fn log_abs_q(n: u32, z: Complex64) -> f64 {
    let nf = n as f64;
    let num = Complex64::new(1.0, 0.0) * (nf * nf) * z * z + Complex64::new(nf, 0.0);
    let den = nf * nf * z.norm_sqr() + nf;
    num.norm().ln() - den.ln()
        + (nf - 2.0) * ((Complex64::new(1.0, 0.0) + z * z).norm().ln() - (1.0 + z.norm_sqr()).ln())
}

/// ¼(∂²/∂x² + ∂²/∂y²) of a scalar potential via 4th-order central stencils,
/// i.e. ∂²/∂z∂z̄.
fn dz_dzbar<F: Fn(Complex64) -> f64>(u: F, z: Complex64, h: f64) -> f64 {
    let x = z.re;
    let y = z.im;
    let second = |fm2: f64, fm1: f64, f0: f64, fp1: f64, fp2: f64| {
        (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    };
    let f0 = u(z);
    let uxx = second(
        u(Complex64::new(x - 2.0 * h, y)),
        u(Complex64::new(x - h, y)),
        f0,
        u(Complex64::new(x + h, y)),
        u(Complex64::new(x + 2.0 * h, y)),
    );
    let uyy = second(
        u(Complex64::new(x, y - 2.0 * h)),
        u(Complex64::new(x, y - h)),
        f0,
        u(Complex64::new(x, y + h)),
        u(Complex64::new(x, y + 2.0 * h)),
    );
    0.25 * (uxx + uyy)
}

/// Finite-difference step for the log-potential Laplacians: 1e−4 relative
/// to the point scale, shrunk near the real axis so the stencil never
/// crosses it.
fn fd_step(z: Complex64) -> f64 {
    let h = 1e-4 * z.norm().max(1.0);
    if z.im != 0.0 {
        h.min(z.im.abs() / 8.0)
    } else {
        h
    }
}

/// The error term `Ẽ_N(z)` separating the real-coefficient critical-point
/// density from the complex one:
/// `(1/π) ∂²/∂z∂z̄ log(1 + sqrt(1 − |Q_N|²))`.
///
/// On the real axis |Q_N| = 1 and the potential loses smoothness, so real z
/// is a domain error.
pub fn so2_crit_error(n: u32, z: Complex64) -> Result<f64> {
    if n < 2 {
        return Err(KrError::InvalidArgument(
            "so2 error term needs N >= 2".into(),
        ));
    }
    if z.im == 0.0 {
        return Err(KrError::InvalidArgument(
            "so2 error term undefined on the real axis (|Q_N| = 1)".into(),
        ));
    }
    // |Q_N| is conjugation-invariant; evaluating in the upper half plane
    // makes so2_crit_error(z̄) = so2_crit_error(z) exact.
    let z = Complex64::new(z.re, z.im.abs());
    let u = |zz: Complex64| {
        let q = log_abs_q(n, zz).exp();
        (1.0 + (1.0 - q * q).max(0.0).sqrt()).ln()
    };
    Ok(dz_dzbar(u, z, fd_step(z)) / PI)
}

/// Exact density of complex critical points of the real (SO(2)) random
/// polynomial: the complex-ensemble density plus the error term.
pub fn so2_crit_density(n: u32, z: Complex64) -> Result<f64> {
    Ok(su2_crit_density(n, z) + so2_crit_error(n, z)?)
}

/// Coefficient field selector for the scaled densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaledField {
    Real,
    Complex,
}

/// Scaling limit `K∞(z) = lim (1/N)·density(N, z/√N)` of the critical-point
/// density.
///
/// Complex: `(1/π)(1 + 1/(1+|z|²)²)` with zero error component. Real: adds
/// `(1/π) ∂²/∂z∂z̄ log(1 + sqrt(1 − |(1+z²)e^{z²}/((1+|z|²)e^{|z|²})|²))`,
/// evaluated with the same finite-difference scheme; real z is a domain
/// error in that case.
pub fn scaled_crit_density(field: ScaledField, z: Complex64) -> Result<ScaledDensity> {
    let cx = (1.0 / PI) * (1.0 + 1.0 / (1.0 + z.norm_sqr()).powi(2));
    match field {
        ScaledField::Complex => Ok(ScaledDensity {
            value: cx,
            component_cx: cx,
            component_err: 0.0,
        }),
        ScaledField::Real => {
            if z.im == 0.0 {
                return Err(KrError::InvalidArgument(
                    "scaled real density undefined on the real axis".into(),
                ));
            }
            let z = Complex64::new(z.re, z.im.abs());
            let u = |zz: Complex64| {
                let log_ratio = (Complex64::new(1.0, 0.0) + zz * zz).norm().ln()
                    - (1.0 + zz.norm_sqr()).ln()
                    + (zz * zz).re
                    - zz.norm_sqr();
                let q = log_ratio.exp();
                (1.0 + (1.0 - q * q).max(0.0).sqrt()).ln()
            };
            let err = dz_dzbar(u, z, fd_step(z)) / PI;
            Ok(ScaledDensity {
                value: cx + err,
                component_cx: cx,
                component_err: err,
            })
        }
    }
}

/// Linear-in-y coefficient of the scaled real density near the real axis at
/// Re z = x: `(1/π)(x⁶ + 3x⁴ + 6x² + 6)/(2 + 2x² + x⁴)^{3/2}`.
pub fn near_real_slope(x: f64) -> f64 {
    let x2 = x * x;
    let num = x2 * x2 * x2 + 3.0 * x2 * x2 + 6.0 * x2 + 6.0;
    let den = (2.0 + 2.0 * x2 + x2 * x2).powf(1.5);
    num / (PI * den)
}

/// Adaptive Simpson quadrature with interval bisection to a relative
/// tolerance. Test-support quality: the integrands here are smooth.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let mid = 0.5 * (a + b);
        let left = simpson(f, a, mid);
        let right = simpson(f, mid, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, mid, left, 0.5 * tol, depth - 1) + rec(f, mid, b, right, 0.5 * tol, depth - 1)
    }
    let whole = simpson(f, a, b);
    rec(f, a, b, whole, rel_tol * whole.abs().max(1e-300), 48)
}

/// Integral of a radial density over all of ℂ: `∫₀^∞ ρ(r)·2πr dr`,
/// compactified through v = 1/(1+r²) so the slow 1/r⁴ tails integrate
/// exactly on [0, 1].
pub fn integrate_radial_density<F: Fn(f64) -> f64>(density_at_radius: F, rel_tol: f64) -> f64 {
    // substitute u = r², v = 1/(1+u): ∫ ρ(r) π du = ∫₀¹ ρ(sqrt(1/v − 1)) π/v² dv
    let g = |v: f64| {
        if v <= 0.0 || v >= 1.0 {
            return 0.0;
        }
        let u = 1.0 / v - 1.0;
        density_at_radius(u.sqrt()) * PI / (v * v)
    };
    adaptive_simpson(&g, 0.0, 1.0, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn su2_origin_value() {
        // (2N−2)/π; N = 10 → 18/π.
        assert!((su2_crit_density(10, c(0.0, 0.0)) - 5.729_577_951_308_232).abs() < 1e-14);
    }

    #[test]
    fn su2_half_i_value() {
        // (10/π)(0.64 − 0.128 + 1/12.25), derived by direct evaluation.
        let v = su2_crit_density(10, c(0.0, 0.5));
        assert!((v - 1.889_591_422_309_000_7).abs() < 1e-14, "{v}");
    }

    #[test]
    fn su2_total_mass_is_n_minus_one() {
        // h' has degree N−1 critical points in total.
        for n in [5u32, 25] {
            let mass = integrate_radial_density(|r| su2_crit_density(n, c(r, 0.0)), 1e-9);
            let expect = (n - 1) as f64;
            assert!(
                (mass - expect).abs() < 1e-6 * expect,
                "N={n}: mass {mass} vs {expect}"
            );
        }
    }

    #[test]
    fn su_zero_values() {
        assert!((su_zero_density(1, 10, &[c(0.0, 0.0)]) - 3.183_098_861_837_907).abs() < 1e-14);
        assert!(
            (su_zero_density(2, 5, &[c(0.0, 0.0), c(0.0, 0.0)]) - 5.066_059_182_116_889).abs()
                < 1e-14
        );
    }

    #[test]
    fn su_zero_total_mass_is_n() {
        // fundamental theorem of algebra at m = 1, independent of the
        // evaluation offset
        for n in [4u32, 13] {
            let mass = integrate_radial_density(|r| su_zero_density(1, n, &[c(r, 0.0)]), 1e-9);
            assert!((mass - n as f64).abs() < 1e-6 * n as f64, "N={n}: {mass}");
        }
    }

    #[test]
    fn so2_error_rejects_real_axis() {
        assert!(so2_crit_error(10, c(0.7, 0.0)).is_err());
    }

    #[test]
    fn so2_error_conjugation_invariant() {
        let a = so2_crit_error(25, c(0.4, 0.6)).unwrap();
        let b = so2_crit_error(25, c(0.4, -0.6)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn so2_error_negative_near_axis_vanishing_far() {
        // density suppressed near ℝ; correction dies off as Im z grows
        for x in [0.0f64, 0.5, 1.5] {
            for y in [0.1f64, 0.2, 0.4] {
                let e = so2_crit_error(25, c(x, y)).unwrap();
                assert!(e < 0.0, "err({x}+{y}i) = {e}");
            }
        }
        let near = so2_crit_error(25, c(0.0, 0.2)).unwrap().abs();
        let far = so2_crit_error(25, c(0.0, 2.0)).unwrap().abs();
        assert!(far < 1e-6 * near);
    }

    #[test]
    fn so2_error_decays_at_twice_lambda() {
        // The closed form is driven by |Q_N|² and so decays like
        // N²·e^{−2λ_z N}; the λ_z bound rate is valid but not tight. Fit the N²-compensated log magnitude on a range where the
        // finite-difference noise floor stays irrelevant.
        let z = c(0.5, 0.25);
        let lam = crate::kacrice::lambda_z(&[z]);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for n in (10..=60u32).step_by(2) {
            let e = so2_crit_error(n, z).unwrap().abs();
            xs.push(n as f64);
            ys.push((e / (n as f64).powi(2)).ln());
        }
        let (slope, _) = crate::kacrice::least_squares_line(&xs, &ys).unwrap();
        let rate = -slope;
        assert!(
            (rate - 2.0 * lam).abs() < 0.1 * (2.0 * lam),
            "rate {rate} vs 2λ = {}",
            2.0 * lam
        );
    }

    #[test]
    fn scaled_complex_values() {
        let at0 = scaled_crit_density(ScaledField::Complex, c(0.0, 0.0)).unwrap();
        assert!((at0.value - 2.0 / PI).abs() < 1e-12);
        assert_eq!(at0.component_err, 0.0);
        let far = scaled_crit_density(ScaledField::Complex, c(1e6, 0.0)).unwrap();
        assert!((far.value - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn scaled_real_rejects_axis_and_splits() {
        assert!(scaled_crit_density(ScaledField::Real, c(0.3, 0.0)).is_err());
        let s = scaled_crit_density(ScaledField::Real, c(0.3, 0.5)).unwrap();
        assert!((s.value - (s.component_cx + s.component_err)).abs() < 1e-15);
        assert!(s.value >= 0.0);
    }

    #[test]
    fn scaled_real_matches_unscaled_limit() {
        // (1/N)·so2_crit_density(N, z/√N) approaches the scaled density;
        // the N = 1600 evaluation must sit closer than N = 400.
        for z in [c(0.0, 0.6), c(0.8, 0.7)] {
            let kinf = scaled_crit_density(ScaledField::Real, z).unwrap().value;
            let at = |n: u32| {
                let zs = z / (n as f64).sqrt();
                so2_crit_density(n, zs).unwrap() / n as f64
            };
            let e400 = (at(400) - kinf).abs();
            let e1600 = (at(1600) - kinf).abs();
            assert!(e1600 < e400, "z={z}: {e400} vs {e1600}");
        }
    }

    #[test]
    fn near_real_slope_closed_values() {
        // 6/2^{3/2} = 3√2/2 exactly; x = 1 derived by direct evaluation.
        let expect0 = 3.0 * 2.0f64.sqrt() / (2.0 * PI);
        assert!((near_real_slope(0.0) - expect0).abs() < 1e-14);
        assert!((near_real_slope(1.0) - 0.455_528_027_786_993_3).abs() < 1e-14);
    }

    #[test]
    fn near_real_slope_matches_scaled_density_limit() {
        // Richardson-extrapolated K_real(x+iy)/y as y → 0⁺ within 1%.
        for x in [0.0f64, 0.5, 1.0, 2.0] {
            let s = |y: f64| {
                scaled_crit_density(ScaledField::Real, c(x, y))
                    .unwrap()
                    .value
                    / y
            };
            let fit = (4.0 * s(0.025) - s(0.05)) / 3.0;
            let expect = near_real_slope(x);
            assert!(
                (fit - expect).abs() < 0.01 * expect,
                "x={x}: fd {fit} vs formula {expect}"
            );
        }
    }

    #[test]
    fn huge_degree_error_term_is_finite() {
        let e = so2_crit_error(1_000_000, c(0.3, 0.4)).unwrap();
        assert!(e.is_finite());
    }
}
