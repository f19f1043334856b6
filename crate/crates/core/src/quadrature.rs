//! Gauss–Legendre rules and the Fubini–Study inner product.

use crate::model::{ModelError, SU2Polynomial};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[0, 1]` (weights sum to 1).
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x descends from near 1
        out[n - 1 - i] = (0.5 * (1.0 + x), 0.5 * w);
        out[i] = (0.5 * (1.0 - x), 0.5 * w);
    }
    out
}

/// `((N+1)/π) ∫ f(z) conj(g(z)) (1+|z|²)^{−(N+2)} dm(z)`.
///
/// After `t = ρ²/(1+ρ²)` the radial integrand is a polynomial of degree at
/// most `N` in `t`, and the angular one a trigonometric polynomial of degree
/// at most `N`; the rules below integrate both exactly.
pub fn fs_inner_product(
    f: &SU2Polynomial,
    g: &SU2Polynomial,
    n: usize,
) -> Result<Complex64, ModelError> {
    if f.degree() > n || g.degree() > n {
        return Err(ModelError::Domain(format!(
            "inner product at degree {n} needs deg f = {} and deg g = {} not above it",
            f.degree(),
            g.degree()
        )));
    }
    let radial = gauss_legendre_unit(n / 2 + 2);
    let angular = 2 * n + 2;
    let excess = n as f64 - 0.5 * (f.degree() + g.degree()) as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (t, w) in radial {
        let rho = (t / (1.0 - t)).sqrt();
        let fc = f.on_circle(rho);
        let gc = g.on_circle(rho);
        let fv = fc.sweep(angular, 0.0);
        let gv = gc.sweep(angular, 0.0);
        let ring: Complex64 = fv.iter().zip(&gv).map(|(a, b)| a * b.conj()).sum();
        total += ring * (w * (1.0 - t).powf(excess) / angular as f64);
    }
    Ok(total * (n + 1) as f64)
}
