//! Unitary change of basis to the ζ-centered orthonormal family
//! `sqrt(binom(N,j)) (z−ζ)^j (1+ζ̄z)^{N−j} / (1+|ζ|²)^{N/2}`.
//!
//! Column `j` of `U` holds the coordinates of the `j`-th ζ-centered element in
//! the monomial orthonormal basis `sqrt(binom(N,k)) z^k`. Writing
//! `ζ = tan(β)·e^{iφ}`, every entry factors as `e^{iφ(j−k)}·R_{kj}` with `R`
//! real, and `R(β)` is a representation of the rotation group, so
//! `R(β) = R(β/2^s)^{2^s}`. The small-angle factor comes from expanding the
//! two linear factors and convolving; at small angle the alternating sums
//! barely cancel, which they do badly at `|ζ| ≈ 1` and large `N`.

use crate::model::{ModelError, SU2Polynomial};
use crate::special::log_binomial_row;
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct BasisChangeMatrix {
    center: Complex64,
    dim: usize,
    // row-major
    entries: Vec<Complex64>,
}

impl BasisChangeMatrix {
    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|k| self.get(k, col)).collect()
    }

    /// `max |(U^H U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// `U^H α`: coefficients of `ψ` in the ζ-centered basis.
    pub fn to_centered(&self, alpha: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .map(|k| self.get(k, j).conj() * alpha[k])
                    .sum()
            })
            .collect()
    }
}

/// Builds `U` for degree `n` and center `zeta`.
pub fn basis_change_matrix(n: usize, zeta: Complex64) -> BasisChangeMatrix {
    let dim = n + 1;
    let rho = zeta.norm();
    if rho == 0.0 || n == 0 {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        return BasisChangeMatrix {
            center: zeta,
            dim,
            entries,
        };
    }
    let beta = rho.atan();
    let mut halvings = 0u32;
    while n as f64 * (beta / f64::from(1u32 << halvings.min(31))).tan() > 0.5 && halvings < 60 {
        halvings += 1;
    }
    let small = (beta / 2f64.powi(halvings as i32)).tan();
    let mut real = small_angle_real_part(n, small);
    for _ in 0..halvings {
        real = square(&real, dim);
    }
    let phase = zeta / rho;
    let mut entries = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        for j in 0..dim {
            let shift = j as i32 - k as i32;
            entries.push(phase.powi(shift) * real[k * dim + j]);
        }
    }
    BasisChangeMatrix {
        center: zeta,
        dim,
        entries,
    }
}

/// Real part `R_{kj}` for a positive real center `t`, by convolving
/// `(z − t)^j` with `(1 + t z)^{N−j}` term by term in log magnitude.
fn small_angle_real_part(n: usize, t: f64) -> Vec<f64> {
    let dim = n + 1;
    let rows: Vec<Vec<f64>> = (0..=n).map(log_binomial_row).collect();
    let log_t = t.ln();
    let log_norm = 0.5 * n as f64 * (t * t).ln_1p();
    let mut out = vec![0.0; dim * dim];
    for j in 0..dim {
        for k in 0..dim {
            // z^k from z^a in (z−t)^j and z^{k−a} in (1+tz)^{N−j}
            let lo = k.saturating_sub(n - j);
            let hi = j.min(k);
            let mut acc = 0.0;
            for a in lo..=hi {
                let log_mag = rows[j][a]
                    + rows[n - j][k - a]
                    + (j - a + k - a) as f64 * log_t
                    + 0.5 * (rows[n][j] - rows[n][k])
                    - log_norm;
                let sign = if (j - a) % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * log_mag.exp();
            }
            out[k * dim + j] = acc;
        }
    }
    out
}

fn square(m: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for l in 0..dim {
            let a = m[i * dim + l];
            if a == 0.0 {
                continue;
            }
            let row = &m[l * dim..(l + 1) * dim];
            let dst = &mut out[i * dim..(i + 1) * dim];
            for (d, b) in dst.iter_mut().zip(row) {
                *d += a * b;
            }
        }
    }
    out
}

/// Value of the ζ-centered expansion `Σ α'_j sqrt(binom(N,j)) (z−ζ)^j (1+ζ̄z)^{N−j} / (1+|ζ|²)^{N/2}`.
pub fn evaluate_centered(centered: &[Complex64], zeta: Complex64, z: Complex64) -> Complex64 {
    let n = centered.len() - 1;
    let s = (1.0 + zeta.norm_sqr()).sqrt();
    let a = (z - zeta) / s;
    let b = (Complex64::new(1.0, 0.0) + zeta.conj() * z) / s;
    let row = log_binomial_row(n);
    let mut a_pow = vec![Complex64::new(1.0, 0.0); n + 1];
    let mut b_pow = vec![Complex64::new(1.0, 0.0); n + 1];
    for j in 1..=n {
        a_pow[j] = a_pow[j - 1] * a;
        b_pow[j] = b_pow[j - 1] * b;
    }
    (0..=n)
        .map(|j| centered[j] * (0.5 * row[j]).exp() * a_pow[j] * b_pow[n - j])
        .sum()
}

/// Largest discrepancy between `ψ` in the monomial basis and in the ζ-centered basis.
///
/// Each discrepancy is divided by `‖α‖₂ (1+|z|²)^{N/2}`, which bounds `|ψ(z)|`.
pub fn eq2_identity_residual(
    poly: &SU2Polynomial,
    zeta: Complex64,
    sample_points: &[Complex64],
) -> Result<f64, ModelError> {
    let n = poly.degree();
    let u = basis_change_matrix(n, zeta);
    let centered = u.to_centered(poly.coefficients());
    let alpha_norm = poly
        .coefficients()
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if alpha_norm == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for &z in sample_points {
        let lhs = poly.evaluate(z)?;
        let rhs = evaluate_centered(&centered, zeta, z);
        let scale = alpha_norm * (1.0 + z.norm_sqr()).powf(0.5 * n as f64);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(worst)
}
