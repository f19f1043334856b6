//! Trial ensembles over random SU(2) polynomials.
//!
//! Every estimator draws trial `i` from the stream `(master_seed, i)`, so an
//! estimate is a pure function of its [`TrialPlan`]. Trials that fail
//! numerically (root finder, contour singularity, quadrature cap, boundary
//! roots) are left out of both numerator and denominator and reported in
//! `trials_failed`; more than 1% failures makes the estimate an error.

pub mod exec;
mod fit;
mod omega;

pub use exec::{default_workers, run_trials, EventTally, MeanTally, Tally, BLOCK_SIZE};
pub use fit::{fit_decay_exponent, DecayFit};
pub use omega::omega_lower_bound;

use crate::model::{log_one_plus_square, sample_polynomial, SU2Polynomial};
use crate::rng::RngSeed;
use crate::zeros::{
    circle_log_moments_with, count_zeros_argument_principle, count_zeros_from_roots,
    find_all_roots, max_modulus_boundary, CircleLogAverages, Disk, ZeroError,
};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;
/// Largest tolerated share of failed trials.
pub const MAX_FAILURE_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub enum McError {
    Domain(String),
    Reliability { failed: u64, trials: u64 },
    Zero(ZeroError),
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::Domain(msg) => write!(f, "domain error: {msg}"),
            McError::Reliability { failed, trials } => write!(
                f,
                "{failed} of {trials} trials failed numerically (limit {:.0}%)",
                MAX_FAILURE_RATE * 100.0
            ),
            McError::Zero(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for McError {}

impl From<ZeroError> for McError {
    fn from(e: ZeroError) -> Self {
        McError::Zero(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest accepted normalized residual of a root.
    pub root_residual: f64,
    /// Roots this close to a disk boundary make the trial fail.
    pub boundary_margin: f64,
    /// Convergence target of circle averages.
    pub quadrature_target: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root_residual: 1e-8,
            boundary_margin: 1e-9,
            quadrature_target: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub degree: usize,
    pub radius: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub workers: usize,
    pub tolerances: Tolerances,
}

impl TrialPlan {
    pub fn new(degree: usize, radius: f64, trials: u64, master_seed: u64) -> Result<Self, McError> {
        let plan = Self {
            degree,
            radius,
            trials,
            master_seed,
            workers: default_workers(),
            tolerances: Tolerances::default(),
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn validate(&self) -> Result<(), McError> {
        if self.trials == 0 {
            return Err(McError::Domain("trials must be at least 1".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(McError::Domain(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if self.workers == 0 {
            return Err(McError::Domain("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn sample(&self, trial_index: u64) -> SU2Polynomial {
        sample_polynomial(self.degree, RngSeed::new(self.master_seed, trial_index))
    }
}

/// A Monte Carlo mean or frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub point: f64,
    pub stderr: f64,
    /// Wilson interval for frequencies, normal interval for means.
    pub ci95: (f64, f64),
    pub trials_used: u64,
    pub trials_failed: u64,
}

impl Estimate {
    pub fn frequency(hits: u64, used: u64, failed: u64) -> Self {
        if used == 0 {
            return Self {
                point: f64::NAN,
                stderr: f64::NAN,
                ci95: (0.0, 1.0),
                trials_used: 0,
                trials_failed: failed,
            };
        }
        let n = used as f64;
        let p = hits as f64 / n;
        let z2 = Z95 * Z95;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Self {
            point: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            ci95: (
                (center - half).max(0.0).min(p),
                (center + half).min(1.0).max(p),
            ),
            trials_used: used,
            trials_failed: failed,
        }
    }

    pub fn mean(tally: &MeanTally) -> Self {
        let n = tally.used as f64;
        let mean = tally.sum.value() / n;
        let var = if tally.used > 1 {
            ((tally.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        let se = (var / n).sqrt();
        Self {
            point: mean,
            stderr: se,
            ci95: (mean - Z95 * se, mean + Z95 * se),
            trials_used: tally.used,
            trials_failed: tally.failed,
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials_used + self.trials_failed
    }
}

/// `sqrt(se_a² + se_b²)`
pub fn pooled_stderr(a: &Estimate, b: &Estimate) -> f64 {
    (a.stderr * a.stderr + b.stderr * b.stderr).sqrt()
}

fn check_failures(used: u64, failed: u64) -> Result<(), McError> {
    let trials = used + failed;
    if failed as f64 > MAX_FAILURE_RATE * trials as f64 {
        return Err(McError::Reliability { failed, trials });
    }
    Ok(())
}

/// Zero-count deviation threshold `ΔN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationSpec {
    pub delta: f64,
}

impl DeviationSpec {
    pub fn new(delta: f64) -> Result<Self, McError> {
        if delta > 0.0 && delta.is_finite() {
            Ok(Self { delta })
        } else {
            Err(McError::Domain(format!("Δ must be positive, got {delta}")))
        }
    }
}

/// `N r² / (1 + r²)`
pub fn expected_zero_count(n: usize, r: f64) -> f64 {
    let r2 = r * r;
    n as f64 * r2 / (1.0 + r2)
}

/// How a trial's zero count is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Counter {
    Roots,
    ArgumentPrinciple,
}

/// Zero count of `poly` in `B(0, r)`; `None` marks a numerical failure.
pub fn trial_zero_count(
    poly: &SU2Polynomial,
    r: f64,
    counter: Counter,
    tol: &Tolerances,
) -> Option<usize> {
    if poly.degree() == 0 {
        return Some(0);
    }
    let disk = Disk::centered(r).ok()?;
    match counter {
        Counter::Roots => {
            let zeros = find_all_roots(poly).ok()?;
            if !zeros.within_tolerance(tol.root_residual) {
                return None;
            }
            let margin = tol.boundary_margin * r.max(1.0);
            if zeros
                .roots
                .iter()
                .any(|z| (z.location.norm() - r).abs() < margin)
            {
                return None;
            }
            Some(count_zeros_from_roots(&zeros, &disk).count)
        }
        Counter::ArgumentPrinciple => count_zeros_argument_principle(poly, &disk)
            .ok()
            .map(|c| c.count),
    }
}

/// Frequency of `event(Ξ)` where `Ξ` is the zero count in `B(0, r)`.
pub fn estimate_count_event(
    plan: &TrialPlan,
    counter: Counter,
    event: impl Fn(usize) -> bool + Sync,
) -> Result<Estimate, McError> {
    plan.validate()?;
    let tally: EventTally<1> = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        trial_zero_count(&poly, plan.radius, counter, &plan.tolerances).map(|xi| [event(xi)])
    });
    check_failures(tally.used, tally.failed)?;
    Ok(Estimate::frequency(tally.hits[0], tally.used, tally.failed))
}

/// Mean of `Ξ` from root locations.
pub fn estimate_zero_count_mean(plan: &TrialPlan) -> Result<Estimate, McError> {
    plan.validate()?;
    let tally: MeanTally = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        trial_zero_count(&poly, plan.radius, Counter::Roots, &plan.tolerances).map(|c| c as f64)
    });
    check_failures(tally.used, tally.failed)?;
    Ok(Estimate::mean(&tally))
}

/// Frequency of `|Ξ − N r²/(1+r²)| ≥ ΔN`.
pub fn estimate_deviation_probability(
    plan: &TrialPlan,
    spec: DeviationSpec,
) -> Result<Estimate, McError> {
    let expected = expected_zero_count(plan.degree, plan.radius);
    let threshold = spec.delta * plan.degree as f64;
    estimate_count_event(plan, Counter::Roots, |xi| {
        (xi as f64 - expected).abs() >= threshold
    })
}

/// Frequency of no zeros in `B(0, r)`.
///
/// Counts by the argument principle; every hundredth trial is also counted
/// from its roots and a disagreement fails that trial.
pub fn estimate_hole_probability(plan: &TrialPlan) -> Result<Estimate, McError> {
    plan.validate()?;
    let tally: EventTally<1> = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        let xi = trial_zero_count(
            &poly,
            plan.radius,
            Counter::ArgumentPrinciple,
            &plan.tolerances,
        )?;
        if i % 100 == 0 && poly.degree() > 0 {
            let check = trial_zero_count(&poly, plan.radius, Counter::Roots, &plan.tolerances)?;
            if check != xi {
                return None;
            }
        }
        Some([xi == 0])
    });
    check_failures(tally.used, tally.failed)?;
    Ok(Estimate::frequency(tally.hits[0], tally.used, tally.failed))
}

/// Max-modulus band violations, split by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandOutliers {
    pub outside: Estimate,
    pub below: Estimate,
    pub above: Estimate,
}

/// `(lower, upper)` log-bounds `(N/2)(ln(1+r²) + ln(1∓δ))` of the max-modulus band.
pub fn max_modulus_band(n: usize, r: f64, delta: f64) -> (f64, f64) {
    let half = 0.5 * n as f64;
    let base = log_one_plus_square(r);
    let lower = if delta >= 1.0 {
        f64::NEG_INFINITY
    } else {
        half * (base + (-delta).ln_1p())
    };
    (lower, half * (base + delta.ln_1p()))
}

/// Frequency that `ln max_{B(0,r)} |ψ|` leaves the band of [`max_modulus_band`].
pub fn max_modulus_outlier_frequency(
    plan: &TrialPlan,
    delta: f64,
) -> Result<BandOutliers, McError> {
    plan.validate()?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(McError::Domain(format!(
            "δ must lie in (0, 1], got {delta}"
        )));
    }
    let (lower, upper) = max_modulus_band(plan.degree, plan.radius, delta);
    let tally: EventTally<2> = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        let m = max_modulus_boundary(&poly, plan.radius).ok()?;
        Some([m.log_value < lower, m.log_value > upper])
    });
    check_failures(tally.used, tally.failed)?;
    let below = tally.hits[0];
    let above = tally.hits[1];
    Ok(BandOutliers {
        outside: Estimate::frequency(below + above, tally.used, tally.failed),
        below: Estimate::frequency(below, tally.used, tally.failed),
        above: Estimate::frequency(above, tally.used, tally.failed),
    })
}

/// `5N ln(2(1 + r²))`
pub fn log_l1_bound(n: usize, r: f64) -> f64 {
    5.0 * n as f64 * (std::f64::consts::LN_2 + log_one_plus_square(r))
}

fn trial_log_moments(poly: &SU2Polynomial, plan: &TrialPlan) -> Option<CircleLogAverages> {
    circle_log_moments_with(poly, plan.radius, plan.tolerances.quadrature_target).ok()
}

/// Whether `∫ |log|ψ(re^{iθ})|| dθ/2π` exceeds `5N ln(2(1+r²))`.
pub fn log_l1_exceeds_bound(poly: &SU2Polynomial, r: f64) -> Result<bool, ZeroError> {
    let m = crate::zeros::circle_log_moments(poly, r)?;
    Ok(m.abs_mean() > log_l1_bound(poly.degree(), r))
}

/// Frequency that the circle `L¹` norm of `log|ψ|` exceeds `5N ln(2(1+r²))`.
pub fn log_l1_outlier_frequency(plan: &TrialPlan) -> Result<Estimate, McError> {
    plan.validate()?;
    let bound = log_l1_bound(plan.degree, plan.radius);
    let tally: EventTally<1> = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        trial_log_moments(&poly, plan).map(|m| [m.abs_mean() > bound])
    });
    check_failures(tally.used, tally.failed)?;
    Ok(Estimate::frequency(tally.hits[0], tally.used, tally.failed))
}

/// `(N/2) ln((1+r²)(1−Δ))`
pub fn circle_average_floor(n: usize, r: f64, delta: f64) -> f64 {
    0.5 * n as f64 * (log_one_plus_square(r) + (-delta).ln_1p())
}

/// Frequency that `∫ log|ψ(re^{iθ})| dθ/2π < (N/2) ln((1+r²)(1−Δ))`.
pub fn circle_average_lower_tail_frequency(
    plan: &TrialPlan,
    delta: f64,
) -> Result<Estimate, McError> {
    plan.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(McError::Domain(format!(
            "Δ must lie in (0, 1), got {delta}"
        )));
    }
    let floor = circle_average_floor(plan.degree, plan.radius, delta);
    let tally: EventTally<1> = run_trials(plan.trials, plan.workers, |i| {
        let poly = plan.sample(i);
        trial_log_moments(&poly, plan).map(|m| [m.mean < floor])
    });
    check_failures(tally.used, tally.failed)?;
    Ok(Estimate::frequency(tally.hits[0], tally.used, tally.failed))
}

/// Mean of `|ψ(ζ)|² / (1+|ζ|²)^N`, which is 1 for every `ζ`.
pub fn estimate_normalized_second_moment(
    plan: &TrialPlan,
    zeta: num_complex::Complex64,
) -> Result<Estimate, McError> {
    plan.validate()?;
    let tally: MeanTally = run_trials(plan.trials, plan.workers, |i| {
        Some(plan.sample(i).evaluate_normalized(zeta).norm_sqr())
    });
    Ok(Estimate::mean(&tally))
}
