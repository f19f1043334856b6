//! The SU(2) polynomial `ψ(z) = Σ α_j sqrt(binom(N, j)) z^j` and its evaluation.

use crate::rng::RngSeed;
use crate::special::log_binomial_row;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;

/// Largest degree for which linear-domain weights are materialized.
pub const DIRECT_EVAL_MAX_DEGREE: usize = 1000;
/// Largest log-magnitude of a single term accepted by [`SU2Polynomial::evaluate`].
pub const DIRECT_EVAL_MAX_LOG_TERM: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    Domain(String),
    /// Direct evaluation would overflow; use `evaluate_normalized`.
    Range(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::Domain(msg) => write!(f, "domain error: {msg}"),
            ModelError::Range(msg) => {
                write!(f, "range error: {msg} (use evaluate_normalized)")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// A degree-`N` polynomial in the orthonormal basis `sqrt(binom(N, j)) z^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SU2Polynomial {
    coefficients: Vec<Complex64>,
    // ½·ln binom(N, j)
    half_log_weights: Vec<f64>,
}

impl SU2Polynomial {
    /// Builds a polynomial from its basis coefficients `α_0..=α_N`.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self, ModelError> {
        if coefficients.is_empty() {
            return Err(ModelError::Domain(
                "coefficient vector must have length degree + 1 >= 1".into(),
            ));
        }
        if let Some(j) = coefficients
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(ModelError::Domain(format!("coefficient {j} is not finite")));
        }
        let n = coefficients.len() - 1;
        let half_log_weights = log_binomial_row(n).into_iter().map(|l| 0.5 * l).collect();
        Ok(Self {
            coefficients,
            half_log_weights,
        })
    }

    /// Real coefficients, for hand-built test polynomials.
    pub fn from_real(coefficients: &[f64]) -> Result<Self, ModelError> {
        Self::new(
            coefficients
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect(),
        )
    }

    /// Polynomial whose monomial coefficients are `c_j`, i.e. `α_j = c_j / sqrt(binom(N, j))`.
    pub fn from_monomial(monomial: &[Complex64]) -> Result<Self, ModelError> {
        let n = monomial.len().saturating_sub(1);
        let row = log_binomial_row(n);
        Self::new(
            monomial
                .iter()
                .zip(row)
                .map(|(c, l)| c * (-0.5 * l).exp())
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `½·ln binom(N, j)` for each `j`.
    pub fn half_log_weights(&self) -> &[f64] {
        &self.half_log_weights
    }

    pub fn max_coefficient_modulus(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Monomial coefficients `α_j sqrt(binom(N, j))`. Only meaningful under the direct-evaluation guard.
    pub fn monomial_coefficients(&self) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .zip(&self.half_log_weights)
            .map(|(a, w)| a * w.exp())
            .collect()
    }

    /// `ψ(z)` by Horner's rule on the weighted coefficients.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, ModelError> {
        let n = self.degree();
        if n > DIRECT_EVAL_MAX_DEGREE {
            return Err(ModelError::Range(format!(
                "degree {n} exceeds direct evaluation limit {DIRECT_EVAL_MAX_DEGREE}"
            )));
        }
        let log_z = z.norm().ln();
        for (j, (a, w)) in self
            .coefficients
            .iter()
            .zip(&self.half_log_weights)
            .enumerate()
        {
            let m = a.norm();
            if m == 0.0 || (j > 0 && z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            let log_term = m.ln() + w + if j == 0 { 0.0 } else { j as f64 * log_z };
            if log_term >= DIRECT_EVAL_MAX_LOG_TERM {
                return Err(ModelError::Range(format!(
                    "term {j} has log-magnitude {log_term:.1} at |z| = {}",
                    z.norm()
                )));
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, w) in self.coefficients.iter().zip(&self.half_log_weights).rev() {
            acc = acc * z + a * w.exp();
        }
        Ok(acc)
    }

    /// `ψ(z) / (1 + |z|²)^{N/2}`, finite for any degree.
    ///
    /// Each term is `α_j exp(½ ln binom(N,j) + j ln|z| − (N/2) ln(1+|z|²))`
    /// times the phase `(z/|z|)^j`, so its modulus never exceeds `|α_j|`.
    pub fn evaluate_normalized(&self, z: Complex64) -> Complex64 {
        let rho = z.norm();
        if rho == 0.0 {
            return self.coefficients[0];
        }
        let n = self.degree() as f64;
        let log_rho = rho.ln();
        let shift = 0.5 * n * log_one_plus_square(rho);
        let unit = z / rho;
        let mut phase = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (a, w)) in self
            .coefficients
            .iter()
            .zip(&self.half_log_weights)
            .enumerate()
        {
            let log_mag = w + j as f64 * log_rho - shift;
            if log_mag > -745.0 {
                acc += a * phase * log_mag.exp();
            }
            phase *= unit;
        }
        acc
    }

    /// `ln |ψ(z)|` without overflow.
    pub fn log_modulus(&self, z: Complex64) -> f64 {
        self.evaluate_normalized(z).norm().ln()
            + 0.5 * self.degree() as f64 * log_one_plus_square(z.norm())
    }

    /// The map `α_j → α_{N−j}`; sends each nonzero root `z₀` to `1/z₀`.
    pub fn reverse_coefficients(&self) -> SU2Polynomial {
        let mut coefficients = self.coefficients.clone();
        coefficients.reverse();
        SU2Polynomial {
            coefficients,
            half_log_weights: self.half_log_weights.clone(),
        }
    }

    /// Normalized evaluator on the circle `|z| = r`.
    pub fn on_circle(&self, r: f64) -> CircleEvaluator {
        CircleEvaluator::new(self, r)
    }
}

/// `ln(1 + ρ²)` without overflow for large `ρ`.
pub fn log_one_plus_square(rho: f64) -> f64 {
    if rho <= 1.0 {
        (rho * rho).ln_1p()
    } else {
        2.0 * rho.ln() + (1.0 / (rho * rho)).ln_1p()
    }
}

/// Draws `ψ` with i.i.d. standard complex Gaussian coefficients from the stream keyed by `seed`.
pub fn sample_polynomial(degree: usize, seed: RngSeed) -> SU2Polynomial {
    let stream = seed.stream();
    let coefficients = (0..=degree as u64)
        .map(|j| stream.complex_gaussian(j))
        .collect();
    SU2Polynomial::new(coefficients).expect("Gaussian samples are finite")
}

/// `ψ(r e^{iθ}) / (1 + r²)^{N/2}` as a trigonometric polynomial in `θ`.
///
/// On a fixed circle the normalized term magnitudes do not depend on `θ`, so
/// they are folded into the coefficients once and each evaluation is a Horner
/// pass in `e^{iθ}`.
#[derive(Debug, Clone)]
pub struct CircleEvaluator {
    radius: f64,
    log_scale: f64,
    coefficients: Vec<Complex64>,
}

impl CircleEvaluator {
    pub fn new(poly: &SU2Polynomial, radius: f64) -> Self {
        let n = poly.degree() as f64;
        let log_scale = 0.5 * n * log_one_plus_square(radius);
        let log_r = radius.ln();
        let coefficients = poly
            .coefficients()
            .iter()
            .zip(poly.half_log_weights())
            .enumerate()
            .map(|(j, (a, w))| {
                if j == 0 {
                    return a * (-log_scale).exp();
                }
                let log_mag = w + j as f64 * log_r - log_scale;
                if log_mag > -745.0 {
                    a * log_mag.exp()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self {
            radius,
            log_scale,
            coefficients,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `(N/2) ln(1 + r²)`: add to `ln|normalized|` to get `ln|ψ|`.
    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// Normalized value at `e^{iθ}` supplied as a unit complex number.
    #[inline]
    pub fn at_unit(&self, unit: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * unit + c;
        }
        acc
    }

    #[inline]
    pub fn at_angle(&self, theta: f64) -> Complex64 {
        self.at_unit(Complex64::from_polar(1.0, theta))
    }

    /// Values at `θ_k = 2πk/m + offset`, `k = 0..m`.
    pub fn sweep(&self, m: usize, offset: f64) -> Vec<Complex64> {
        let step = Complex64::from_polar(1.0, TAU / m as f64);
        let mut units = Vec::with_capacity(m);
        let mut unit = Complex64::from_polar(1.0, offset);
        for k in 0..m {
            // reseed the rotation periodically to keep the phase exact
            if k % 64 == 0 {
                unit = Complex64::from_polar(1.0, TAU * k as f64 / m as f64 + offset);
            }
            units.push(unit);
            unit *= step;
        }
        let mut out = Vec::with_capacity(m);
        let mut chunks = units.chunks_exact(4);
        for u in &mut chunks {
            // four independent Horner chains per pass
            let mut acc = [Complex64::new(0.0, 0.0); 4];
            for c in self.coefficients.iter().rev() {
                for (a, &x) in acc.iter_mut().zip(u) {
                    *a = *a * x + c;
                }
            }
            out.extend_from_slice(&acc);
        }
        out.extend(chunks.remainder().iter().map(|&u| self.at_unit(u)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_coefficients() {
        assert!(SU2Polynomial::new(vec![]).is_err());
        assert!(SU2Polynomial::new(vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).is_err());
        assert!(SU2Polynomial::new(vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    #[test]
    fn degree_zero_sample_has_one_coefficient() {
        let p = sample_polynomial(0, RngSeed::new(1, 2));
        assert_eq!(p.coefficients().len(), 1);
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_polynomial(40, RngSeed::new(99, 5));
        let b = sample_polynomial(40, RngSeed::new(99, 5));
        assert_eq!(a, b);
        let bits = |p: &SU2Polynomial| -> Vec<(u64, u64)> {
            p.coefficients()
                .iter()
                .map(|c| (c.re.to_bits(), c.im.to_bits()))
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn second_moment_of_coefficients() {
        let trials = 10_000;
        for j in [0usize, 3] {
            let mean: f64 = (0..trials)
                .map(|t| sample_polynomial(3, RngSeed::new(2024, t)).coefficients()[j].norm_sqr())
                .sum::<f64>()
                / trials as f64;
            assert!((mean - 1.0).abs() < 0.05, "j={j} mean={mean}");
        }
    }

    #[test]
    fn hand_evaluations() {
        let p = SU2Polynomial::from_real(&[1.0, 1.0]).unwrap();
        assert!((p.evaluate(c(2.0, 0.0)).unwrap() - c(3.0, 0.0)).norm() < 1e-15);
        let q = SU2Polynomial::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert!(q.evaluate(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        let r = sample_polynomial(12, RngSeed::new(5, 5));
        assert_eq!(r.evaluate(c(0.0, 0.0)).unwrap(), r.coefficients()[0]);
    }

    #[test]
    fn direct_evaluation_guard() {
        let big = sample_polynomial(1001, RngSeed::new(1, 1));
        assert!(matches!(
            big.evaluate(c(0.5, 0.0)),
            Err(ModelError::Range(_))
        ));
        let p = sample_polynomial(200, RngSeed::new(1, 1));
        assert!(matches!(p.evaluate(c(1e4, 0.0)), Err(ModelError::Range(_))));
        assert!(p.evaluate_normalized(c(1e4, 0.0)).norm().is_finite());
    }

    #[test]
    fn normalized_single_term() {
        let mut a = vec![c(0.0, 0.0); 9];
        a[0] = c(1.0, 0.0);
        let p = SU2Polynomial::new(a).unwrap();
        for z in [c(0.3, -0.2), c(2.0, 1.0), c(0.0, 7.0)] {
            let expect = (1.0 + z.norm_sqr()).powf(-4.0);
            assert!((p.evaluate_normalized(z) - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn normalized_agrees_with_direct() {
        let mut rng = SplitMix64::new(17);
        for trial in 0..200 {
            let n = rng.range_inclusive(0, 30);
            let p = sample_polynomial(n, RngSeed::new(8, trial));
            let z = rng.point_in_disk(3.0);
            let direct = p.evaluate(z).unwrap();
            let via = p.evaluate_normalized(z) * (1.0 + z.norm_sqr()).powf(0.5 * n as f64);
            let scale = direct.norm().max(1e-300);
            assert!((direct - via).norm() / scale < 1e-10, "n={n} z={z}");
        }
    }

    #[test]
    fn normalized_bounded_for_unit_coefficients() {
        let mut rng = SplitMix64::new(3);
        for n in [10usize, 500, 10_000] {
            let coeffs: Vec<_> = (0..=n)
                .map(|_| Complex64::from_polar(rng.next_f64(), rng.uniform(0.0, TAU)))
                .collect();
            let p = SU2Polynomial::new(coeffs).unwrap();
            for _ in 0..20 {
                let z = rng.point_in_disk(50.0);
                let v = p.evaluate_normalized(z);
                assert!(v.norm().is_finite());
                assert!(v.norm() <= ((n + 1) as f64).sqrt() + 1e-9);
            }
        }
    }

    #[test]
    fn reversal_is_an_involution() {
        let p = SU2Polynomial::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let r = p.reverse_coefficients();
        assert_eq!(r.coefficients(), &[c(3.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(r.reverse_coefficients(), p);
    }

    #[test]
    fn reversal_inverts_linear_root() {
        // ψ = 1 + 2z has root −1/2; reversed ψ = 2 + z has root −2
        let p = SU2Polynomial::from_real(&[1.0, 2.0]).unwrap();
        let r = p.reverse_coefficients();
        assert!(p.evaluate(c(-0.5, 0.0)).unwrap().norm() < 1e-15);
        assert!(r.evaluate(c(-2.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn circle_evaluator_matches_pointwise() {
        let p = sample_polynomial(25, RngSeed::new(4, 4));
        for r in [0.3, 1.0, 2.5] {
            let circ = p.on_circle(r);
            let vals = circ.sweep(200, 0.1);
            for (k, v) in vals.iter().enumerate() {
                let z = Complex64::from_polar(r, TAU * k as f64 / 200.0 + 0.1);
                assert!((v - p.evaluate_normalized(z)).norm() < 1e-13);
            }
        }
    }
}
