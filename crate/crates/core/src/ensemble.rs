//! Ensemble specification, multi-index bookkeeping, coefficient sampling,
//! and exact evaluation of sampled polynomials with their derivative jets.
//!
//! The polynomials are weighted monomial sums `Σ_J c_J binom(N,J)^{1/2} z^J`
//! over multi-indices `|J| ≤ N`. Real coefficients give the SO(m+1) ensemble,
//! complex coefficients the SU(m+1) ensemble.

use crate::error::{KrError, Result};
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Coefficient field of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// iid standard real Gaussians (SO(m+1) ensemble).
    Real,
    /// iid standard complex Gaussians, `E|c|² = 1` (SU(m+1) ensemble).
    Complex,
}

/// Which point process the pipeline evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Simultaneous zeros of a system of m independent polynomials.
    Zeros,
    /// Critical points of a single polynomial (zeros of its gradient).
    Critical,
}

/// A multi-index `J = (j_1, …, j_m)` of monomial exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self { entries }
    }

    /// Zero multi-index in `m` variables.
    pub fn zero(m: usize) -> Self {
        Self {
            entries: vec![0; m],
        }
    }

    /// Unit multi-index `e_q` in `m` variables.
    pub fn unit(m: usize, q: usize) -> Self {
        let mut entries = vec![0; m];
        entries[q] = 1;
        Self { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total order `|J| = Σ j_q`.
    pub fn order(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Component-wise sum.
    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self { entries }
    }
}

/// Fixes the random polynomial measure: dimension, degree, coefficient
/// field, and which point process is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    m: usize,
    degree: u32,
    field: Field,
    mode: Mode,
}

impl EnsembleSpec {
    pub fn new(m: usize, degree: u32, field: Field, mode: Mode) -> Result<Self> {
        if m < 1 {
            return Err(KrError::InvalidArgument("m must be >= 1".into()));
        }
        if degree < 1 {
            return Err(KrError::InvalidArgument("degree must be >= 1".into()));
        }
        if mode == Mode::Critical && degree < 2 {
            return Err(KrError::InvalidArgument(
                "critical mode needs degree >= 2 (derivative nontrivial)".into(),
            ));
        }
        Ok(Self {
            m,
            degree,
            field,
            mode,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of coefficients per component, `D_N = binom(N+m, m)`.
    pub fn coefficient_count(&self) -> usize {
        let b = binomial(self.degree + self.m as u32, self.m as u32);
        let digits = b.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0] as usize,
            _ => panic!("coefficient count overflows u64"),
        }
    }

    /// Number of independent polynomial components (m in zeros mode, 1 in
    /// critical mode).
    pub fn component_count(&self) -> usize {
        match self.mode {
            Mode::Zeros => self.m,
            Mode::Critical => 1,
        }
    }
}

/// Enumerate all multi-indices with `|J| ≤ N` in graded-lexicographic order:
/// ascending total degree, and within a degree the leading entry descends
/// first. Deterministic; every coefficient vector is indexed against it.
pub fn enumerate_multi_indices(m: usize, max_order: u32) -> Vec<MultiIndex> {
    assert!(m >= 1, "m must be >= 1");
    let mut out = Vec::new();
    let mut prefix = vec![0u32; m];
    for t in 0..=max_order {
        push_graded(&mut out, &mut prefix, 0, t);
    }
    out
}

fn push_graded(out: &mut Vec<MultiIndex>, prefix: &mut Vec<u32>, pos: usize, rem: u32) {
    if pos + 1 == prefix.len() {
        prefix[pos] = rem;
        out.push(MultiIndex::new(prefix.clone()));
        return;
    }
    for j in (0..=rem).rev() {
        prefix[pos] = j;
        push_graded(out, prefix, pos + 1, rem - j);
    }
}

/// Exact multinomial coefficient `binom(N, J) = N! / ((N−|J|)! j_1! … j_m!)`,
/// computed multiplicatively as a product of binomials; exact well past
/// N = 500.
pub fn multinomial_coeff(n: u32, index: &MultiIndex) -> Result<BigUint> {
    if index.order() > n {
        return Err(KrError::InvalidArgument(format!(
            "|J| = {} exceeds N = {n}",
            index.order()
        )));
    }
    let mut remaining = n;
    let mut result = BigUint::from(1u32);
    for &j in index.entries() {
        result *= binomial(remaining, j);
        remaining -= j;
    }
    Ok(result)
}

fn binomial(n: u32, k: u32) -> BigUint {
    let k = k.min(n - k);
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// `binom(N, J)` rounded to f64, for weighting monomials.
pub fn multinomial_coeff_f64(n: u32, index: &MultiIndex) -> Result<f64> {
    use num_traits::ToPrimitive;
    let exact = multinomial_coeff(n, index)?;
    exact
        .to_f64()
        .ok_or_else(|| KrError::NonFinite("multinomial coefficient".into()))
}

/// One sampled coefficient vector, indexed parallel to
/// [`enumerate_multi_indices`]. Real-field samples have imaginary part
/// exactly zero.
#[derive(Debug, Clone)]
pub struct CoefficientVector {
    pub values: Vec<Complex64>,
}

/// A full sample from the ensemble: one coefficient vector per component
/// (m components in zeros mode, one in critical mode).
#[derive(Debug, Clone)]
pub struct SampledPolynomial {
    pub components: Vec<CoefficientVector>,
}

/// Draw iid Gaussian coefficients for every component of the ensemble.
/// Real field: standard real normals. Complex field: `E c = 0`, `E c² = 0`,
/// `E|c|² = 1`, i.e. real and imaginary parts each N(0, ½).
pub fn sample_coefficients<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> SampledPolynomial {
    let d_n = spec.coefficient_count();
    let half_sqrt = std::f64::consts::FRAC_1_SQRT_2;
    let components = (0..spec.component_count())
        .map(|_| {
            let values = (0..d_n)
                .map(|_| match spec.field() {
                    Field::Real => {
                        let a: f64 = rng.sample(StandardNormal);
                        Complex64::new(a, 0.0)
                    }
                    Field::Complex => {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re * half_sqrt, im * half_sqrt)
                    }
                })
                .collect();
            CoefficientVector { values }
        })
        .collect();
    SampledPolynomial { components }
}

/// Value and derivatives of a sampled polynomial at a point.
#[derive(Debug, Clone)]
pub enum PolynomialJet {
    /// Critical mode: one polynomial h with gradient and symmetric Hessian.
    Critical {
        value: Complex64,
        gradient: Vec<Complex64>,
        hessian: DMatrix<Complex64>,
    },
    /// Zeros mode: m component values and the m×m Jacobian
    /// `jacobian[(q, p)] = ∂h_q/∂z_p`.
    Zeros {
        values: Vec<Complex64>,
        jacobian: DMatrix<Complex64>,
    },
}

/// Evaluate the sampled polynomial and its derivative jet at `z` by direct
/// summation with per-monomial derivative factors.
///
/// Monomial powers stay representable for |z| ≤ 10 at desk-scale degrees;
/// far outside that the powers can overflow f64.
pub fn eval_jet(sample: &SampledPolynomial, spec: &EnsembleSpec, z: &[Complex64]) -> PolynomialJet {
    let m = spec.m();
    assert_eq!(z.len(), m, "point dimension must match spec");
    assert_eq!(sample.components.len(), spec.component_count());
    let indices = enumerate_multi_indices(m, spec.degree());

    match spec.mode() {
        Mode::Critical => {
            let coeffs = &sample.components[0];
            let mut value = Complex64::new(0.0, 0.0);
            let mut gradient = vec![Complex64::new(0.0, 0.0); m];
            let mut hessian = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
            for (idx, c) in indices.iter().zip(&coeffs.values) {
                let w = multinomial_coeff_f64(spec.degree(), idx)
                    .expect("|J| <= N")
                    .sqrt();
                let wc = c * w;
                value += wc * monomial_derivative(idx, &MultiIndex::zero(m), z);
                for (q, g) in gradient.iter_mut().enumerate() {
                    *g += wc * monomial_derivative(idx, &MultiIndex::unit(m, q), z);
                }
                // Fill q <= p and mirror below, so symmetry is exact.
                for q in 0..m {
                    for p in q..m {
                        let alpha = MultiIndex::unit(m, q).plus(&MultiIndex::unit(m, p));
                        let term = wc * monomial_derivative(idx, &alpha, z);
                        hessian[(q, p)] += term;
                    }
                }
            }
            for q in 0..m {
                for p in 0..q {
                    hessian[(q, p)] = hessian[(p, q)];
                }
            }
            PolynomialJet::Critical {
                value,
                gradient,
                hessian,
            }
        }
        Mode::Zeros => {
            let mut values = vec![Complex64::new(0.0, 0.0); m];
            let mut jacobian = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
            for (q, coeffs) in sample.components.iter().enumerate() {
                for (idx, c) in indices.iter().zip(&coeffs.values) {
                    let w = multinomial_coeff_f64(spec.degree(), idx)
                        .expect("|J| <= N")
                        .sqrt();
                    let wc = c * w;
                    values[q] += wc * monomial_derivative(idx, &MultiIndex::zero(m), z);
                    for p in 0..m {
                        jacobian[(q, p)] +=
                            wc * monomial_derivative(idx, &MultiIndex::unit(m, p), z);
                    }
                }
            }
            PolynomialJet::Zeros { values, jacobian }
        }
    }
}

/// `∂^α z^J` evaluated at `z`: the falling-factorial prefactor times
/// `z^{J−α}`, or zero when any `α_q > j_q`.
pub fn monomial_derivative(index: &MultiIndex, alpha: &MultiIndex, z: &[Complex64]) -> Complex64 {
    let mut coeff = 1.0;
    for (&j, &a) in index.entries().iter().zip(alpha.entries()) {
        if a > j {
            return Complex64::new(0.0, 0.0);
        }
        for i in 0..a {
            coeff *= (j - i) as f64;
        }
    }
    let mut out = Complex64::new(coeff, 0.0);
    for (q, (&j, &a)) in index.entries().iter().zip(alpha.entries()).enumerate() {
        out *= z[q].powu(j - a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn enumeration_m1() {
        let idx = enumerate_multi_indices(1, 2);
        let flat: Vec<Vec<u32>> = idx.iter().map(|i| i.entries().to_vec()).collect();
        assert_eq!(flat, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn enumeration_m2_order1() {
        let idx = enumerate_multi_indices(2, 1);
        let flat: Vec<Vec<u32>> = idx.iter().map(|i| i.entries().to_vec()).collect();
        assert_eq!(flat, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn enumeration_count_matches_binomial() {
        for m in 1..=4usize {
            for n in 0..=30u32 {
                let count = enumerate_multi_indices(m, n).len();
                let expected = binomial(n + m as u32, m as u32);
                assert_eq!(BigUint::from(count), expected, "m={m} N={n}");
            }
        }
    }

    #[test]
    fn enumeration_m2_n2_has_six() {
        assert_eq!(enumerate_multi_indices(2, 2).len(), 6);
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(
            multinomial_coeff(4, &MultiIndex::new(vec![2])).unwrap(),
            BigUint::from(6u32)
        );
        // 3!/(1!·1!·1!) = 6
        assert_eq!(
            multinomial_coeff(3, &MultiIndex::new(vec![1, 1])).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            multinomial_coeff(17, &MultiIndex::zero(3)).unwrap(),
            BigUint::from(1u32)
        );
        assert!(multinomial_coeff(3, &MultiIndex::new(vec![2, 2])).is_err());
    }

    #[test]
    fn multinomial_large_n_exact() {
        // N = 500 stays exact; spot-check against the Pascal recurrence.
        let j = MultiIndex::new(vec![200, 150]);
        let big = multinomial_coeff(500, &j).unwrap();
        assert!(big.to_u64_digits().len() > 2, "should exceed u128 range");
        let mut rhs = multinomial_coeff(499, &j).unwrap();
        rhs += multinomial_coeff(499, &MultiIndex::new(vec![199, 150])).unwrap();
        rhs += multinomial_coeff(499, &MultiIndex::new(vec![200, 149])).unwrap();
        assert_eq!(big, rhs);
    }

    proptest! {
        #[test]
        fn multinomial_pascal_recurrence(n in 1u32..40, j1 in 0u32..12, j2 in 0u32..12, j3 in 0u32..12) {
            prop_assume!(j1 + j2 + j3 <= n);
            let j = MultiIndex::new(vec![j1, j2, j3]);
            let lhs = multinomial_coeff(n, &j).unwrap();
            // C(N,J) = C(N-1,J) + Σ_q C(N-1, J-e_q)
            let mut rhs = if j.order() < n {
                multinomial_coeff(n - 1, &j).unwrap()
            } else {
                BigUint::from(0u32)
            };
            for q in 0..3 {
                let mut e = j.entries().to_vec();
                if e[q] == 0 {
                    continue;
                }
                e[q] -= 1;
                rhs += multinomial_coeff(n - 1, &MultiIndex::new(e)).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = EnsembleSpec::new(2, 6, Field::Complex, Mode::Zeros).unwrap();
        let a = sample_coefficients(&spec, &mut ChaCha8Rng::seed_from_u64(7));
        let b = sample_coefficients(&spec, &mut ChaCha8Rng::seed_from_u64(7));
        for (ca, cb) in a.components.iter().zip(&b.components) {
            assert_eq!(ca.values, cb.values);
        }
    }

    #[test]
    fn sampling_moments_within_clt_bounds() {
        let spec = EnsembleSpec::new(1, 1, Field::Complex, Mode::Zeros).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut mean = Complex64::new(0.0, 0.0);
        let mut abs2 = 0.0;
        let mut square = Complex64::new(0.0, 0.0);
        let mut count = 0usize;
        while count < 100_000 {
            let s = sample_coefficients(&spec, &mut rng);
            for v in &s.components[0].values {
                mean += v;
                abs2 += v.norm_sqr();
                square += v * v;
                count += 1;
            }
        }
        let nf = count as f64;
        // E c = 0 within 4σ; Re and Im of the mean each have σ = sqrt(1/2n).
        let sigma_mean = (0.5f64 / nf).sqrt();
        assert!((mean.re / nf).abs() < 4.0 * sigma_mean);
        assert!((mean.im / nf).abs() < 4.0 * sigma_mean);
        // E|c|² = 1 within 4σ; Var(|c|²) = 1 for a standard complex Gaussian.
        assert!((abs2 / nf - 1.0).abs() < 4.0 / nf.sqrt());
        // E c² = 0 within 4σ; Var(Re c²) = Var(Im c²) = 1/2.
        assert!((square.re / nf).abs() < 4.0 * (0.5f64 / nf).sqrt());
        assert!((square.im / nf).abs() < 4.0 * (0.5f64 / nf).sqrt());
    }

    #[test]
    fn real_field_has_zero_imaginary_parts() {
        let spec = EnsembleSpec::new(1, 9, Field::Real, Mode::Critical).unwrap();
        let s = sample_coefficients(&spec, &mut ChaCha8Rng::seed_from_u64(3));
        assert!(s.components[0].values.iter().all(|v| v.im == 0.0));
    }

    #[test]
    fn jet_of_constant_polynomial() {
        let spec = EnsembleSpec::new(2, 3, Field::Complex, Mode::Critical).unwrap();
        let d_n = spec.coefficient_count();
        let mut values = vec![c(0.0, 0.0); d_n];
        values[0] = c(1.0, 0.0);
        let sample = SampledPolynomial {
            components: vec![CoefficientVector { values }],
        };
        match eval_jet(&sample, &spec, &[c(0.3, 0.2), c(-0.1, 0.5)]) {
            PolynomialJet::Critical {
                value,
                gradient,
                hessian,
            } => {
                assert_eq!(value, c(1.0, 0.0));
                assert!(gradient.iter().all(|g| g.norm() == 0.0));
                assert!(hessian.iter().all(|h| h.norm() == 0.0));
            }
            _ => panic!("wrong jet variant"),
        }
    }

    #[test]
    fn jet_linear_term_carries_sqrt_weight() {
        // m=1, N=2, coefficients (0,1,0): h(z) = sqrt(2)·z
        let spec = EnsembleSpec::new(1, 2, Field::Complex, Mode::Critical).unwrap();
        let values = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let sample = SampledPolynomial {
            components: vec![CoefficientVector { values }],
        };
        match eval_jet(&sample, &spec, &[c(0.0, 0.0)]) {
            PolynomialJet::Critical {
                value, gradient, ..
            } => {
                assert_eq!(value, c(0.0, 0.0));
                assert!((gradient[0] - c(2.0f64.sqrt(), 0.0)).norm() < 1e-15);
            }
            _ => panic!("wrong jet variant"),
        }
    }

    #[test]
    fn jet_gradient_matches_finite_differences() {
        let spec = EnsembleSpec::new(2, 8, Field::Complex, Mode::Critical).unwrap();
        let sample = sample_coefficients(&spec, &mut ChaCha8Rng::seed_from_u64(11));
        let z = [c(0.4, -0.3), c(0.2, 0.6)];
        let jet = eval_jet(&sample, &spec, &z);
        let (gradient, hessian) = match &jet {
            PolynomialJet::Critical {
                gradient, hessian, ..
            } => (gradient.clone(), hessian.clone()),
            _ => panic!("wrong jet variant"),
        };
        let value_at = |z: &[Complex64]| match eval_jet(&sample, &spec, z) {
            PolynomialJet::Critical { value, .. } => value,
            _ => unreachable!(),
        };
        let h = 1e-5;
        for q in 0..2 {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[q] += c(h, 0.0);
            zm[q] -= c(h, 0.0);
            let fd = (value_at(&zp) - value_at(&zm)) / c(2.0 * h, 0.0);
            let rel = (fd - gradient[q]).norm() / gradient[q].norm();
            assert!(rel < 1e-6, "gradient fd mismatch: rel {rel}");
        }
        // Symmetry is exact by construction.
        assert_eq!(hessian[(0, 1)], hessian[(1, 0)]);
    }

    #[test]
    fn zeros_mode_jet_shape() {
        let spec = EnsembleSpec::new(2, 4, Field::Real, Mode::Zeros).unwrap();
        let sample = sample_coefficients(&spec, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(sample.components.len(), 2);
        match eval_jet(&sample, &spec, &[c(0.1, 0.2), c(0.3, -0.4)]) {
            PolynomialJet::Zeros { values, jacobian } => {
                assert_eq!(values.len(), 2);
                assert_eq!(jacobian.nrows(), 2);
                assert_eq!(jacobian.ncols(), 2);
            }
            _ => panic!("wrong jet variant"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(0, 5, Field::Real, Mode::Zeros).is_err());
        assert!(EnsembleSpec::new(1, 1, Field::Real, Mode::Critical).is_err());
        assert!(EnsembleSpec::new(1, 2, Field::Real, Mode::Critical).is_ok());
        let spec = EnsembleSpec::new(2, 5, Field::Complex, Mode::Zeros).unwrap();
        assert_eq!(spec.coefficient_count(), 21); // C(7,2)
    }
}
