use super::{CountMethod, Disk, ZeroCount, ZeroError, ZeroSet, BOUNDARY_MARGIN};
use crate::model::SU2Polynomial;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

const MAX_REFINEMENTS: u32 = 20;
/// Samples below this fraction of the largest sample modulus are treated as
/// zeros on the contour.
const VANISHING: f64 = 1e-13;

/// Counts roots strictly inside `disk`; roots within [`BOUNDARY_MARGIN`] of
/// the circle are still decided by the strict inequality but flagged.
pub fn count_zeros_from_roots(zeros: &ZeroSet, disk: &Disk) -> ZeroCount {
    let margin = BOUNDARY_MARGIN * disk.radius.max(1.0);
    let mut count = 0;
    let mut boundary_flags = 0;
    for root in &zeros.roots {
        let dist = (root.location - disk.center).norm();
        if (dist - disk.radius).abs() < margin {
            boundary_flags += 1;
        }
        if dist < disk.radius {
            count += 1;
        }
    }
    ZeroCount {
        count,
        method: CountMethod::FromRoots,
        boundary_flags,
    }
}

/// Winding number of `ψ` around the boundary of `disk` by phase tracking.
///
/// Starts from `16(N+1)` equally spaced samples and bisects any step whose
/// phase increment exceeds π/2, at most 20 times per step.
pub fn count_zeros_argument_principle(
    poly: &SU2Polynomial,
    disk: &Disk,
) -> Result<ZeroCount, ZeroError> {
    let n = poly.degree();
    let m = 16 * (n + 1);
    let total = if disk.center == Complex64::new(0.0, 0.0) {
        let circle = poly.on_circle(disk.radius);
        let samples = circle.sweep(m, 0.0);
        track_phase(&samples, m, |theta| circle.at_angle(theta))?
    } else {
        let at = |theta: f64| {
            poly.evaluate_normalized(disk.center + Complex64::from_polar(disk.radius, theta))
        };
        let samples: Vec<Complex64> = (0..m).map(|k| at(TAU * k as f64 / m as f64)).collect();
        track_phase(&samples, m, at)?
    };
    let winding = total / TAU;
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.01 || rounded < 0.0 || rounded > n as f64 {
        return Err(ZeroError::Uncertified { winding });
    }
    Ok(ZeroCount {
        count: rounded as usize,
        method: CountMethod::ArgumentPrinciple,
        boundary_flags: 0,
    })
}

#[inline]
fn increment(a: Complex64, b: Complex64) -> f64 {
    let q = b * a.conj();
    q.im.atan2(q.re)
}

fn track_phase(
    samples: &[Complex64],
    m: usize,
    at: impl Fn(f64) -> Complex64,
) -> Result<f64, ZeroError> {
    let h = TAU / m as f64;
    // compared in squared modulus
    let floor = VANISHING * VANISHING * samples.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    for (k, v) in samples.iter().enumerate() {
        if !(v.norm_sqr() > floor) {
            return Err(ZeroError::ContourSingularity {
                angle: h * k as f64,
            });
        }
    }
    let mut total = 0.0;
    for k in 0..m {
        let a = samples[k];
        let b = samples[(k + 1) % m];
        let inc = increment(a, b);
        if inc.abs() <= FRAC_PI_2 {
            total += inc;
        } else {
            total += refine(&at, floor, h * k as f64, h, a, b)?;
        }
    }
    Ok(total)
}

/// Phase change across `[theta, theta + width]` by repeated bisection.
fn refine(
    at: &impl Fn(f64) -> Complex64,
    floor: f64,
    theta: f64,
    width: f64,
    a: Complex64,
    b: Complex64,
) -> Result<f64, ZeroError> {
    // (start, width, value at start, value at end, depth)
    let mut stack = vec![(theta, width, a, b, 0u32)];
    let mut total = 0.0;
    while let Some((t0, w, va, vb, depth)) = stack.pop() {
        let inc = increment(va, vb);
        if inc.abs() <= FRAC_PI_2 {
            total += inc;
            continue;
        }
        if depth == MAX_REFINEMENTS {
            return Err(ZeroError::ContourSingularity {
                angle: t0 + 0.5 * w,
            });
        }
        let mid = t0 + 0.5 * w;
        let vm = at(mid);
        if !(vm.norm_sqr() > floor) {
            return Err(ZeroError::ContourSingularity { angle: mid });
        }
        stack.push((mid, 0.5 * w, vm, vb, depth + 1));
        stack.push((t0, 0.5 * w, va, vm, depth + 1));
    }
    debug_assert!(total.abs() <= PI * 2.0 * (1u64 << MAX_REFINEMENTS) as f64);
    Ok(total)
}
