use super::{Root, ZeroError, ZeroSet};
use crate::model::SU2Polynomial;
use num_complex::Complex64;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    pub max_sweeps: usize,
    /// Stop moving a root once its correction is below `tolerance·(1+|z|)`.
    pub tolerance: f64,
    pub polish_steps: usize,
    /// Coefficients `|α_j| < truncation·max|α|` at the top end are dropped.
    pub truncation: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 500,
            tolerance: 1e-13,
            polish_steps: 2,
            truncation: 1e-14,
        }
    }
}

/// All roots of `ψ` by Aberth–Ehrlich iteration with default options.
pub fn find_all_roots(poly: &SU2Polynomial) -> Result<ZeroSet, ZeroError> {
    find_all_roots_with(poly, &AberthOptions::default())
}

pub fn find_all_roots_with(
    poly: &SU2Polynomial,
    opts: &AberthOptions,
) -> Result<ZeroSet, ZeroError> {
    let n = poly.degree();
    if n == 0 {
        return Err(ZeroError::Domain("root finding needs degree >= 1".into()));
    }
    let alpha = poly.coefficients();
    let max_alpha = poly.max_coefficient_modulus();
    if max_alpha == 0.0 {
        return Err(ZeroError::Domain("polynomial is identically zero".into()));
    }
    let mut top = n;
    while top > 0 && alpha[top].norm() < opts.truncation * max_alpha {
        top -= 1;
    }
    let low = alpha.iter().take_while(|a| a.norm() == 0.0).count();
    let zero_root = Complex64::new(0.0, 0.0);
    let mut locations = vec![zero_root; low];

    if top > low {
        let weights = poly.half_log_weights();
        let log_mags: Vec<f64> = (low..=top)
            .map(|j| {
                let m = alpha[j].norm();
                if m == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    m.ln() + weights[j]
                }
            })
            .collect();
        let peak = log_mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let coeffs: Vec<Complex64> = (low..=top)
            .zip(&log_mags)
            .map(|(j, lm)| {
                if lm.is_finite() {
                    alpha[j] / alpha[j].norm() * (lm - peak).exp()
                } else {
                    zero_root
                }
            })
            .collect();
        locations.extend(aberth(&coeffs, &log_mags, opts)?);
    }

    let roots = locations
        .into_iter()
        .map(|z| Root {
            location: z,
            residual: poly.evaluate_normalized(z).norm(),
        })
        .collect();
    Ok(ZeroSet {
        degree: n,
        roots,
        degree_deficit: n - top,
    })
}

/// Value, derivative ratio and a rounding-error bound of `p` at `z`.
struct Eval {
    /// `p(z)/p'(z)`
    newton: Complex64,
    /// `|p|` relative to its rounding bound; `<= 1` means numerically zero.
    backward: f64,
    /// `|p(z)|` in the scaling used (reversed for `|z| > 1`).
    magnitude: f64,
}

#[inline]
fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64, f64) {
    let ax = x.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
        bound = bound * ax + c.norm();
    }
    (p, dp, bound)
}

fn evaluate(coeffs: &[Complex64], reversed: &[Complex64], z: Complex64) -> Eval {
    let d = (coeffs.len() - 1) as f64;
    let eps = f64::EPSILON;
    if z.norm() <= 1.0 {
        let (p, dp, bound) = horner(coeffs, z);
        Eval {
            newton: p / dp,
            backward: p.norm() / ((4.0 * d + 1.0) * eps * bound),
            magnitude: p.norm(),
        }
    } else {
        // p(z) = z^d q(1/z) with q the reversed polynomial
        let w = z.inv();
        let (q, dq, bound) = horner(reversed, w);
        let inner = Complex64::new(d, 0.0) - w * dq / q;
        Eval {
            newton: (w * inner).inv(),
            backward: q.norm() / ((4.0 * d + 1.0) * eps * bound),
            magnitude: q.norm(),
        }
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(j, ln|c_j|)`, one circle per hull edge.
fn initial_guesses(log_mags: &[f64]) -> Vec<Complex64> {
    let d = log_mags.len() - 1;
    let pts: Vec<(usize, f64)> = log_mags
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .map(|(i, &v)| (i, v))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (i1, v1) = hull[hull.len() - 2];
            let (i2, v2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or below the chord
            let cross = (i2 as f64 - i1 as f64) * (p.1 - v1) - (v2 - v1) * (p.0 as f64 - i1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    let sigma = 0.7;
    for edge in hull.windows(2) {
        let (i, vi) = edge[0];
        let (k, vk) = edge[1];
        let count = k - i;
        let radius = ((vi - vk) / count as f64).exp();
        for m in 0..count {
            let angle = TAU * m as f64 / count as f64 + TAU * i as f64 / d as f64 + sigma;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn aberth(
    coeffs: &[Complex64],
    log_mags: &[f64],
    opts: &AberthOptions,
) -> Result<Vec<Complex64>, ZeroError> {
    let d = coeffs.len() - 1;
    let reversed: Vec<Complex64> = coeffs.iter().rev().cloned().collect();
    let mut z = initial_guesses(log_mags);
    debug_assert_eq!(z.len(), d);
    let mut done = vec![false; d];
    let mut remaining = d;
    let mut sweeps = 0;
    while remaining > 0 {
        if sweeps == opts.max_sweeps {
            return Err(ZeroError::NonConvergence {
                sweeps,
                unconverged: (0..d).filter(|&i| !done[i]).collect(),
            });
        }
        sweeps += 1;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let e = evaluate(coeffs, &reversed, z[i]);
            if e.magnitude == 0.0 || e.backward <= 1.0 {
                done[i] = true;
                remaining -= 1;
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    repulsion += (z[i] - zj).inv();
                }
            }
            let step = e.newton / (Complex64::new(1.0, 0.0) - e.newton * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // coincident iterates: nudge and retry next sweep
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                continue;
            }
            z[i] -= step;
            if step.norm() < opts.tolerance * (1.0 + z[i].norm()) {
                done[i] = true;
                remaining -= 1;
            }
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..opts.polish_steps {
            let e = evaluate(coeffs, &reversed, *zi);
            if e.magnitude == 0.0 {
                break;
            }
            let candidate = *zi - e.newton;
            let after = evaluate(coeffs, &reversed, candidate);
            // compare ln|p| in a common scaling
            let log_p = |m: f64, x: Complex64| {
                m.ln()
                    + if x.norm() <= 1.0 {
                        0.0
                    } else {
                        d as f64 * x.norm().ln()
                    }
            };
            if log_p(after.magnitude, candidate) < log_p(e.magnitude, *zi) {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_polynomial;
    use crate::rng::RngSeed;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_unity() {
        for n in [1usize, 2, 5, 16, 64] {
            let mut a = vec![c(0.0, 0.0); n + 1];
            a[0] = c(-1.0, 0.0);
            a[n] = c(1.0, 0.0);
            let p = SU2Polynomial::new(a).unwrap();
            let zs = find_all_roots(&p).unwrap();
            assert_eq!(zs.roots.len(), n);
            let mut angles: Vec<f64> = zs
                .roots
                .iter()
                .map(|r| {
                    assert!((r.location.norm() - 1.0).abs() < 1e-10);
                    r.location.arg().rem_euclid(TAU)
                })
                .collect();
            angles.sort_by(f64::total_cmp);
            for (k, a) in angles.iter().enumerate() {
                let expect = TAU * k as f64 / n as f64;
                let diff = (a - expect).abs().min(TAU - (a - expect).abs());
                assert!(diff < 1e-10, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn linear_case() {
        let p = SU2Polynomial::new(vec![c(2.0, -1.0), c(0.5, 3.0)]).unwrap();
        let zs = find_all_roots(&p).unwrap();
        let expect = -c(2.0, -1.0) / c(0.5, 3.0);
        assert_eq!(zs.roots.len(), 1);
        assert!((zs.roots[0].location - expect).norm() < 1e-14);
    }

    #[test]
    fn degree_zero_is_rejected() {
        let p = SU2Polynomial::from_real(&[3.0]).unwrap();
        assert!(matches!(find_all_roots(&p), Err(ZeroError::Domain(_))));
        let z = SU2Polynomial::from_real(&[0.0, 0.0]).unwrap();
        assert!(matches!(find_all_roots(&z), Err(ZeroError::Domain(_))));
    }

    #[test]
    fn random_degree_100() {
        for t in 0..5 {
            let p = sample_polynomial(100, RngSeed::new(100, t));
            let zs = find_all_roots(&p).unwrap();
            assert_eq!(zs.roots.len(), 100);
            assert_eq!(zs.degree_deficit, 0);
            assert!(zs.max_residual() <= 1e-8, "residual {}", zs.max_residual());
        }
    }

    #[test]
    fn high_degree() {
        let p = sample_polynomial(600, RngSeed::new(600, 0));
        let zs = find_all_roots(&p).unwrap();
        assert_eq!(zs.roots.len(), 600);
        assert!(zs.max_residual() <= 1e-8);
    }

    #[test]
    fn exact_zero_low_coefficients_are_roots_at_origin() {
        let p = SU2Polynomial::from_real(&[0.0, 0.0, 1.0]).unwrap();
        let zs = find_all_roots(&p).unwrap();
        assert_eq!(zs.roots.len(), 2);
        assert!(zs.roots.iter().all(|r| r.location.norm() == 0.0));
    }

    #[test]
    fn truncated_leading_coefficients_become_deficit() {
        // 1 + z with two vanishing top coefficients
        let p = SU2Polynomial::new(vec![
            c(1.0, 0.0),
            c(1.0 / 3f64.sqrt(), 0.0),
            c(0.0, 0.0),
            c(1e-17, 0.0),
        ])
        .unwrap();
        let zs = find_all_roots(&p).unwrap();
        assert_eq!(zs.degree_deficit, 2);
        assert_eq!(zs.roots.len() + zs.degree_deficit, 3);
        assert!((zs.roots[0].location - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn sweep_cap_reports_unconverged_indices() {
        let p = sample_polynomial(40, RngSeed::new(1, 1));
        let opts = AberthOptions {
            max_sweeps: 1,
            ..AberthOptions::default()
        };
        match find_all_roots_with(&p, &opts) {
            Err(ZeroError::NonConvergence {
                sweeps,
                unconverged,
            }) => {
                assert_eq!(sweeps, 1);
                assert!(!unconverged.is_empty());
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
