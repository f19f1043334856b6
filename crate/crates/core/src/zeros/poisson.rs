use super::ZeroError;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// θ-grid size used by [`poisson_partition_deviation`].
pub const PARTITION_GRID: usize = 1 << 14;

/// `P_r(ζ, z) = (r² − |ζ|²) / |z − ζ|²` for `|ζ| < r` and `|z| = r`.
pub fn poisson_kernel(zeta: Complex64, z: Complex64, r: f64) -> Result<f64, ZeroError> {
    if !(zeta.norm() < r) {
        return Err(ZeroError::Domain(format!(
            "Poisson kernel needs |ζ| < r, got |ζ| = {} and r = {r}",
            zeta.norm()
        )));
    }
    if (z.norm() - r).abs() > 1e-12 * r {
        return Err(ZeroError::Domain(format!(
            "Poisson kernel needs |z| = r, got |z| = {} and r = {r}",
            z.norm()
        )));
    }
    Ok((r * r - zeta.norm_sqr()) / (z - zeta).norm_sqr())
}

/// `max_θ |(1/m) Σ_j (P_r(ζ_j, re^{iθ}) − 1)|` for `ζ_j` at the arc midpoints
/// of the circle of radius `κr`, each pushed `perturbation` further out.
pub fn poisson_partition_deviation(
    m: usize,
    kappa: f64,
    r: f64,
    perturbation: f64,
) -> Result<f64, ZeroError> {
    if m == 0 || !(0.0..1.0).contains(&kappa) || !(r > 0.0) || perturbation < 0.0 {
        return Err(ZeroError::Domain(format!(
            "need m >= 1, κ in [0,1), r > 0, perturbation >= 0; got m={m}, κ={kappa}, r={r}, perturbation={perturbation}"
        )));
    }
    let radius = kappa * r + perturbation;
    if radius >= r {
        return Err(ZeroError::Domain(format!(
            "κr + perturbation = {radius} reaches the circle of radius {r}"
        )));
    }
    let points: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(radius, TAU * (j as f64 + 0.5) / m as f64))
        .collect();
    let numer = r * r - radius * radius;
    let mut worst: f64 = 0.0;
    for k in 0..PARTITION_GRID {
        let z = Complex64::from_polar(r, TAU * k as f64 / PARTITION_GRID as f64);
        let mean = points
            .iter()
            .map(|zeta| numer / (z - zeta).norm_sqr())
            .sum::<f64>()
            / m as f64;
        worst = worst.max((mean - 1.0).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_kernel_is_one() {
        for k in 0..8 {
            let z = Complex64::from_polar(2.0, k as f64);
            assert!(
                (poisson_kernel(Complex64::new(0.0, 0.0), z, 2.0).unwrap() - 1.0).abs() < 1e-15
            );
        }
    }

    #[test]
    fn kernel_has_mean_one() {
        for zeta in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.2),
            Complex64::from_polar(0.9, 2.0),
        ] {
            let n = 4096;
            let mean: f64 = (0..n)
                .map(|k| {
                    poisson_kernel(
                        zeta,
                        Complex64::from_polar(1.0, TAU * k as f64 / n as f64),
                        1.0,
                    )
                    .unwrap()
                })
                .sum::<f64>()
                / n as f64;
            assert!((mean - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn half_radius_bounds() {
        let r = 1.7;
        for a in 0..16 {
            let zeta = Complex64::from_polar(r / 2.0, a as f64 * 0.4);
            for k in 0..64 {
                let p = poisson_kernel(zeta, Complex64::from_polar(r, TAU * k as f64 / 64.0), r)
                    .unwrap();
                assert!((1.0 / 3.0 - 1e-12..=3.0 + 1e-12).contains(&p));
            }
        }
    }

    #[test]
    fn kernel_domain_errors() {
        let z = Complex64::new(1.0, 0.0);
        assert!(poisson_kernel(Complex64::new(1.0, 0.0), z, 1.0).is_err());
        assert!(poisson_kernel(Complex64::new(0.2, 0.0), Complex64::new(0.5, 0.0), 1.0).is_err());
    }

    #[test]
    fn partition_deviation_centered() {
        assert!(poisson_partition_deviation(7, 0.0, 1.0, 0.0).unwrap() < 1e-15);
    }

    #[test]
    fn partition_deviation_closed_form() {
        // (1/m) Σ P − 1 = 2 Σ_l q^l cos(lm(θ − φ₀)), q = κ^m; maximum 2q/(1−q)
        // is attained on the grid when 2m divides its size.
        for (m, kappa) in [(8usize, 0.7), (16, 0.85), (64, 0.95)] {
            let q = f64::powi(kappa, m as i32);
            let expect = 2.0 * q / (1.0 - q);
            let got = poisson_partition_deviation(m, kappa, 1.0, 0.0).unwrap();
            assert!((got - expect).abs() < 1e-12 * expect.max(1.0), "m={m}");
        }
    }

    #[test]
    fn partition_deviation_geometry_errors() {
        assert!(poisson_partition_deviation(4, 0.9, 1.0, 0.2).is_err());
        assert!(poisson_partition_deviation(0, 0.5, 1.0, 0.0).is_err());
        assert!(poisson_partition_deviation(4, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn refinement_does_not_blow_up() {
        for kappa in [0.5, 0.8, 0.95] {
            let a = poisson_partition_deviation(10, kappa, 1.0, 0.0).unwrap();
            let b = poisson_partition_deviation(20, kappa, 1.0, 0.0).unwrap();
            assert!(b <= 2.0 * a + 1e-15);
        }
    }
}
