use super::{find_all_roots, poisson_kernel, ZeroError};
use crate::model::{CircleEvaluator, SU2Polynomial};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub const LOG_INTEGRAL_NODE_CAP: usize = 1 << 20;
const LOG_INTEGRAL_TARGET: f64 = 1e-9;
/// Samples below this normalized modulus are replaced by a local sub-average.
const NEAR_ZERO: f64 = 1e-290;
const LOCAL_SUBDIVISION: usize = 16;

/// Circle averages of `log|ψ(re^{iθ})|` with respect to `dθ/2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleLogAverages {
    pub mean: f64,
    /// average of `log⁺|ψ|`
    pub positive: f64,
    /// average of `log⁻|ψ|`
    pub negative: f64,
    pub nodes: usize,
}

impl CircleLogAverages {
    /// `∫ |log|ψ|| dθ/2π`
    pub fn abs_mean(&self) -> f64 {
        self.positive + self.negative
    }
}

/// `∫ log|ψ(re^{iθ})| dθ/2π`.
pub fn circle_log_integral(poly: &SU2Polynomial, r: f64) -> Result<f64, ZeroError> {
    circle_log_moments(poly, r).map(|m| m.mean)
}

/// Trapezoid rule on `log|ψ|` over `|z| = r`, doubling the node count until
/// successive means differ by less than `1e-9`.
pub fn circle_log_moments(poly: &SU2Polynomial, r: f64) -> Result<CircleLogAverages, ZeroError> {
    circle_log_moments_with(poly, r, LOG_INTEGRAL_TARGET)
}

/// [`circle_log_moments`] with a caller-chosen convergence target.
pub fn circle_log_moments_with(
    poly: &SU2Polynomial,
    r: f64,
    target: f64,
) -> Result<CircleLogAverages, ZeroError> {
    check_radius(r)?;
    if !(target > 0.0) {
        return Err(ZeroError::Domain(format!(
            "quadrature target must be positive, got {target}"
        )));
    }
    if poly.max_coefficient_modulus() == 0.0 {
        return Err(ZeroError::Domain("log|ψ| of the zero polynomial".into()));
    }
    let circle = poly.on_circle(r);
    let shift = circle.log_scale();
    let sample = |circle: &CircleEvaluator, m: usize, offset: f64| -> Vec<[f64; 3]> {
        let h = TAU / m as f64;
        circle
            .sweep(m, offset)
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                let log_abs = if v.norm() >= NEAR_ZERO {
                    v.norm().ln() + shift
                } else {
                    local_log_average(circle, h * k as f64 + offset, h) + shift
                };
                [log_abs, log_abs.max(0.0), (-log_abs).max(0.0)]
            })
            .collect()
    };
    let m0 = (4 * (poly.degree() + 1)).max(32).next_power_of_two();
    let (sums, nodes) = doubling_trapezoid(m0, target, |m, offset| sample(&circle, m, offset))?;
    Ok(CircleLogAverages {
        mean: sums[0],
        positive: sums[1],
        negative: sums[2],
        nodes,
    })
}

fn local_log_average(circle: &CircleEvaluator, center: f64, width: f64) -> f64 {
    let sub = width / LOCAL_SUBDIVISION as f64;
    let mut acc = 0.0;
    for i in 0..LOCAL_SUBDIVISION {
        let theta = center - 0.5 * width + (i as f64 + 0.5) * sub;
        acc += circle.at_angle(theta).norm().max(f64::MIN_POSITIVE).ln();
    }
    acc / LOCAL_SUBDIVISION as f64
}

/// Periodic trapezoid rule with nested doubling. `batch(m, offset)` returns
/// samples at `2πk/m + offset`; convergence is judged on component 0.
fn doubling_trapezoid<const K: usize>(
    m0: usize,
    target: f64,
    mut batch: impl FnMut(usize, f64) -> Vec<[f64; K]>,
) -> Result<([f64; K], usize), ZeroError> {
    let mut m = m0;
    let mut sums = [0.0; K];
    for s in batch(m, 0.0) {
        for i in 0..K {
            sums[i] += s[i];
        }
    }
    let mut prev = sums.map(|x| x / m as f64);
    loop {
        if 2 * m > LOG_INTEGRAL_NODE_CAP {
            return Err(ZeroError::Accuracy {
                best: prev[0],
                gap: f64::NAN,
                nodes: m,
            });
        }
        // midpoints of the current grid
        for s in batch(m, PI / m as f64) {
            for i in 0..K {
                sums[i] += s[i];
            }
        }
        m *= 2;
        let cur = sums.map(|x| x / m as f64);
        let gap = (cur[0] - prev[0]).abs();
        if gap < target {
            return Ok((cur, m));
        }
        if 2 * m > LOG_INTEGRAL_NODE_CAP {
            return Err(ZeroError::Accuracy {
                best: cur[0],
                gap,
                nodes: m,
            });
        }
        prev = cur;
    }
}

/// `∫ P_r(ζ, re^{iθ}) log|ψ(re^{iθ})| dθ/2π`, the harmonic majorant of `log|ψ(ζ)|`.
pub fn poisson_log_average(
    poly: &SU2Polynomial,
    zeta: Complex64,
    r: f64,
) -> Result<f64, ZeroError> {
    check_radius(r)?;
    if zeta.norm() >= r {
        return Err(ZeroError::Domain(format!(
            "|ζ| = {} must be inside the circle of radius {r}",
            zeta.norm()
        )));
    }
    let circle = poly.on_circle(r);
    let shift = circle.log_scale();
    let m0 = (4 * (poly.degree() + 1)).max(64).next_power_of_two();
    let (sums, _) = doubling_trapezoid(m0, LOG_INTEGRAL_TARGET, |m, offset| {
        let h = TAU / m as f64;
        circle
            .sweep(m, offset)
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                let theta = h * k as f64 + offset;
                let z = Complex64::from_polar(r, theta);
                let kernel = poisson_kernel(zeta, z, r).expect("ζ inside, z on circle");
                let log_abs = if v.norm() >= NEAR_ZERO {
                    v.norm().ln()
                } else {
                    local_log_average(&circle, theta, h)
                } + shift;
                [kernel * log_abs]
            })
            .collect()
    })?;
    Ok(sums[0])
}

/// `|log|ψ(0)| + Σ_{|a|<r} log(r/|a|) − ∫ log|ψ(re^{iθ})| dθ/2π|`.
pub fn jensen_residual(poly: &SU2Polynomial, r: f64) -> Result<f64, ZeroError> {
    check_radius(r)?;
    let at_origin = poly.coefficients()[0].norm();
    if !(at_origin > 1e-12 * poly.max_coefficient_modulus()) {
        return Err(ZeroError::Domain("Jensen's formula needs ψ(0) != 0".into()));
    }
    let interior: f64 = if poly.degree() == 0 {
        0.0
    } else {
        find_all_roots(poly)?
            .roots
            .iter()
            .map(|root| root.location.norm())
            .filter(|&m| m < r)
            .map(|m| (r / m).ln())
            .sum()
    };
    let integral = circle_log_integral(poly, r)?;
    Ok((at_origin.ln() + interior - integral).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxModulus {
    /// `ln max_{|z|≤r} |ψ(z)|`
    pub log_value: f64,
    /// `exp(log_value)` when it is representable.
    pub value: Option<f64>,
    pub argmax: Complex64,
}

/// Maximum of `|ψ|` over the closed disk `|z| ≤ r`, attained on the boundary.
///
/// Scans `8(N+1)` angles, then golden-section refines the three best local
/// maxima to an angular tolerance of `1e-10`.
pub fn max_modulus_boundary(poly: &SU2Polynomial, r: f64) -> Result<MaxModulus, ZeroError> {
    check_radius(r)?;
    let circle = poly.on_circle(r);
    let m = 8 * (poly.degree() + 1);
    let h = TAU / m as f64;
    let mags: Vec<f64> = circle.sweep(m, 0.0).iter().map(|v| v.norm()).collect();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&k| mags[k] >= mags[(k + m - 1) % m] && mags[k] >= mags[(k + 1) % m])
        .collect();
    peaks.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
    peaks.truncate(3);
    let mut best = (mags[peaks[0]], h * peaks[0] as f64);
    for &k in &peaks {
        let center = h * k as f64;
        let (theta, value) = golden_max(|t| circle.at_angle(t).norm(), center - h, center + h);
        if value > best.0 {
            best = (value, theta);
        }
    }
    let log_value = best.0.ln() + circle.log_scale();
    Ok(MaxModulus {
        log_value,
        value: (log_value < 709.0).then(|| log_value.exp()),
        argmax: Complex64::from_polar(r, best.1.rem_euclid(TAU)),
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-10 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |acc, p| if p.1 > acc.1 { p } else { acc })
}

fn check_radius(r: f64) -> Result<(), ZeroError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(ZeroError::Domain(format!(
            "radius must be positive, got {r}"
        )))
    }
}
