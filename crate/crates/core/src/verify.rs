//! Invariant suites with stable identifiers.
//!
//! Each suite reduces its checks to one measured number and compares it with
//! a threshold; `passed` means `measured <= threshold`. The suites are
//! deterministic for a given master seed.

use crate::basis::{basis_change_matrix, eq2_identity_residual};
use crate::model::{sample_polynomial, SU2Polynomial};
use crate::montecarlo::{
    estimate_count_event, estimate_hole_probability, estimate_normalized_second_moment,
    omega_lower_bound, pooled_stderr, run_trials, trial_zero_count, Counter, EventTally, TrialPlan,
};
use crate::quadrature::fs_inner_product;
use crate::rng::{RngSeed, SplitMix64};
use crate::special::log_binomial;
use crate::zeros::{
    circle_log_integral, count_zeros_argument_principle, count_zeros_from_roots, find_all_roots,
    jensen_residual, poisson_kernel, poisson_log_average, Disk,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
}

impl SuiteReport {
    fn new(id: &str, description: &str, measured: f64, threshold: f64) -> Self {
        Self {
            id: id.to_string(),
            description: description.to_string(),
            passed: measured <= threshold,
            measured,
            threshold,
        }
    }
}

type Suite = fn(u64) -> SuiteReport;

const SUITES: &[(&str, Suite)] = &[
    ("model.determinism", determinism),
    ("model.normalized_consistency", normalized_consistency),
    ("model.second_moment", second_moment),
    ("basis.unitarity", unitarity),
    ("basis.identity", basis_identity),
    ("quadrature.orthonormality", orthonormality),
    ("quadrature.beta_closed_form", beta_closed_form),
    ("zeros.root_conservation", root_conservation),
    ("zeros.cross_oracle", cross_oracle),
    ("zeros.reversal_duality", reversal_duality),
    ("zeros.jensen", jensen),
    ("zeros.two_radius_jensen", two_radius_jensen),
    ("zeros.subharmonic", subharmonic),
    ("zeros.poisson_mean_one", poisson_mean_one),
    ("montecarlo.omega_dominance", omega_dominance),
    ("montecarlo.hole_within_deviation", hole_within_deviation),
    ("montecarlo.reversal_symmetry", reversal_symmetry),
    ("montecarlo.worker_invariance", worker_invariance),
];

/// Identifiers of all suites, in run order.
pub fn suite_ids() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs one suite by identifier.
pub fn run_suite(id: &str, seed: u64) -> Option<SuiteReport> {
    SUITES.iter().find(|s| s.0 == id).map(|s| (s.1)(seed))
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| (s.1)(seed)).collect()
}

/// Largest relative distance `|a − b| / max(1, |b|)` after greedily pairing
/// each point of `a` with its nearest unused point of `b`; infinite if the
/// sizes differ.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()));
    let mut worst: f64 = 0.0;
    for i in order {
        let best = (0..b.len())
            .filter(|&k| !used[k])
            .map(|k| (k, (a[i] - b[k]).norm() / b[k].norm().max(1.0)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        if let Some((k, d)) = best {
            used[k] = true;
            worst = worst.max(d);
        }
    }
    worst
}

/// Smallest relative gap between a root and any of the circles `|z| = r`.
pub fn boundary_gap(roots: &[Complex64], radii: &[f64]) -> f64 {
    roots
        .iter()
        .flat_map(|z| radii.iter().map(move |&r| (z.norm() - r).abs() / r))
        .fold(f64::INFINITY, f64::min)
}

fn instance(seed: u64, index: u64, max_degree: usize) -> SU2Polynomial {
    let mut pick = SplitMix64::new(seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n = pick.range_inclusive(1, max_degree);
    sample_polynomial(n, RngSeed::new(seed, index))
}

fn determinism(seed: u64) -> SuiteReport {
    let mut mismatches = 0u32;
    for i in 0..50 {
        let a = sample_polynomial(17, RngSeed::new(seed, i));
        let b = sample_polynomial(17, RngSeed::new(seed, i));
        let same = a
            .coefficients()
            .iter()
            .zip(b.coefficients())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits());
        mismatches += u32::from(!same);
    }
    SuiteReport::new(
        "model.determinism",
        "samples are a pure function of (N, seed, trial index); mismatches",
        mismatches as f64,
        0.0,
    )
}

fn normalized_consistency(seed: u64) -> SuiteReport {
    let mut rng = SplitMix64::new(seed);
    let mut worst: f64 = 0.0;
    for i in 0..60 {
        let poly = instance(seed, i, 30);
        for _ in 0..10 {
            let z = rng.point_in_disk(3.0);
            let direct = poly.evaluate(z).expect("small degree");
            let scaled =
                poly.evaluate_normalized(z) * (1.0 + z.norm_sqr()).powf(0.5 * poly.degree() as f64);
            let scale = direct.norm().max(f64::MIN_POSITIVE);
            worst = worst.max((direct - scaled).norm() / scale);
        }
    }
    SuiteReport::new(
        "model.normalized_consistency",
        "normalized evaluation times (1+|z|²)^{N/2} against direct evaluation; max relative error",
        worst,
        1e-10,
    )
}

fn second_moment(seed: u64) -> SuiteReport {
    let plan = TrialPlan::new(10, 1.0, 10_000, seed).expect("valid plan");
    let mut worst: f64 = 0.0;
    for zeta in [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.5),
        Complex64::new(3.0, 0.0),
    ] {
        let e = estimate_normalized_second_moment(&plan, zeta).expect("valid plan");
        worst = worst.max((e.point - 1.0).abs() / e.stderr);
    }
    SuiteReport::new(
        "model.second_moment",
        "mean of normalized |ψ(ζ)|² over 10⁴ trials is 1; max deviation in standard errors",
        worst,
        3.0,
    )
}

fn unitarity(_seed: u64) -> SuiteReport {
    let mut worst: f64 = 0.0;
    for n in [1usize, 5, 20, 60, 100] {
        for zeta in [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.7, 0.2),
            Complex64::from_polar(1.0, 2.1),
            Complex64::from_polar(2.0, -0.7),
        ] {
            worst = worst.max(basis_change_matrix(n, zeta).unitarity_defect());
        }
    }
    SuiteReport::new(
        "basis.unitarity",
        "‖U*U − I‖_max for N ≤ 100, |ζ| ≤ 2",
        worst,
        1e-10,
    )
}

fn basis_identity(seed: u64) -> SuiteReport {
    let mut rng = SplitMix64::new(seed.wrapping_add(1));
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let poly = instance(seed, 1000 + i, 30);
        let points: Vec<Complex64> = (0..20).map(|_| rng.point_in_disk(2.0)).collect();
        for zeta in [Complex64::new(0.5, 0.0), Complex64::new(0.7, 0.2)] {
            worst = worst.max(eq2_identity_residual(&poly, zeta, &points).expect("small degree"));
        }
    }
    SuiteReport::new(
        "basis.identity",
        "monomial and ζ-centered expansions agree; max normalized residual",
        worst,
        1e-8,
    )
}

fn unit_vector(n: usize, j: usize) -> SU2Polynomial {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[j] = Complex64::new(1.0, 0.0);
    SU2Polynomial::new(c).expect("finite")
}

fn orthonormality(_seed: u64) -> SuiteReport {
    let n = 10;
    let basis: Vec<SU2Polynomial> = (0..=n).map(|j| unit_vector(n, j)).collect();
    let mut worst: f64 = 0.0;
    for (j, f) in basis.iter().enumerate() {
        for (k, g) in basis.iter().enumerate() {
            let ip = fs_inner_product(f, g, n).expect("same degree");
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    SuiteReport::new(
        "quadrature.orthonormality",
        "Gram matrix of the weighted monomial basis at N = 10; max entry error",
        worst,
        1e-10,
    )
}

fn beta_closed_form(_seed: u64) -> SuiteReport {
    let mut worst: f64 = 0.0;
    for n in 1..=40usize {
        for j in 0..=n {
            let mut mono = vec![Complex64::new(0.0, 0.0); n + 1];
            mono[j] = Complex64::new(1.0, 0.0);
            let z_j = SU2Polynomial::from_monomial(&mono).expect("finite");
            let ip = fs_inner_product(&z_j, &z_j, n).expect("same degree");
            let expect = (-log_binomial(n, j).expect("j ≤ n")).exp();
            worst = worst.max((ip - expect).norm());
        }
    }
    SuiteReport::new(
        "quadrature.beta_closed_form",
        "‖z^j‖² = 1/binom(N, j) for N ≤ 40; max error",
        worst,
        1e-10,
    )
}

fn root_conservation(seed: u64) -> SuiteReport {
    let mut bad = 0u32;
    for i in 0..100 {
        let poly = instance(seed, 2000 + i, 60);
        match find_all_roots(&poly) {
            Ok(z) => bad += u32::from(z.roots.len() + z.degree_deficit != poly.degree()),
            Err(_) => bad += 1,
        }
    }
    let mut c = vec![Complex64::new(0.0, 0.0); 8];
    c[0] = Complex64::new(1.0, 0.0);
    c[3] = Complex64::new(0.5, -0.5);
    let truncated = SU2Polynomial::new(c).expect("finite");
    match find_all_roots(&truncated) {
        Ok(z) => bad += u32::from(z.roots.len() != 3 || z.degree_deficit != 4),
        Err(_) => bad += 1,
    }
    SuiteReport::new(
        "zeros.root_conservation",
        "|roots| + degree deficit = N; violations",
        bad as f64,
        0.0,
    )
}

fn cross_oracle(seed: u64) -> SuiteReport {
    let radii = [0.5, 1.0, 2.0];
    let mut mismatches = 0u32;
    let mut checked = 0u64;
    let mut index = 3000u64;
    while checked < 200 {
        let poly = instance(seed, index, 50);
        let r = radii[(index % 3) as usize];
        index += 1;
        let Ok(zeros) = find_all_roots(&poly) else {
            mismatches += 1;
            checked += 1;
            continue;
        };
        if boundary_gap(&zeros.locations(), &[r]) < 1e-3 {
            continue;
        }
        checked += 1;
        let disk = Disk::centered(r).expect("positive radius");
        let from_roots = count_zeros_from_roots(&zeros, &disk).count;
        match count_zeros_argument_principle(&poly, &disk) {
            Ok(c) if c.count == from_roots => {}
            _ => mismatches += 1,
        }
    }
    SuiteReport::new(
        "zeros.cross_oracle",
        "argument-principle count equals root count on 200 instances; mismatches",
        mismatches as f64,
        0.0,
    )
}

fn reversal_duality(seed: u64) -> SuiteReport {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let poly = instance(seed, 4000 + i, 30);
        let (Ok(a), Ok(b)) = (
            find_all_roots(&poly),
            find_all_roots(&poly.reverse_coefficients()),
        ) else {
            worst = f64::INFINITY;
            continue;
        };
        let inverted: Vec<Complex64> = a.locations().iter().map(|z| z.inv()).collect();
        worst = worst.max(match_distance(&b.locations(), &inverted));
    }
    SuiteReport::new(
        "zeros.reversal_duality",
        "roots of the reversed polynomial are the reciprocals; max relative distance",
        worst,
        1e-8,
    )
}

fn jensen(seed: u64) -> SuiteReport {
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut index = 5000u64;
    while used < 100 {
        let poly = instance(seed, index, 50);
        index += 1;
        let Ok(zeros) = find_all_roots(&poly) else {
            continue;
        };
        if boundary_gap(&zeros.locations(), &[1.0]) < 1e-3 {
            continue;
        }
        match jensen_residual(&poly, 1.0) {
            Ok(res) => {
                worst = worst.max(res);
                used += 1;
            }
            Err(_) => continue,
        }
    }
    SuiteReport::new(
        "zeros.jensen",
        "Jensen's formula at r = 1 on 100 instances; max residual",
        worst,
        1e-6,
    )
}

fn two_radius_jensen(seed: u64) -> SuiteReport {
    let (r, kappa) = (1.0f64, 1.2f64);
    let outer = kappa * r;
    let mut worst: f64 = 0.0;
    let mut used = 0;
    let mut index = 6000u64;
    while used < 50 {
        let poly = instance(seed, index, 30);
        index += 1;
        let Ok(zeros) = find_all_roots(&poly) else {
            continue;
        };
        let roots = zeros.locations();
        if boundary_gap(&roots, &[r, outer]) < 1e-3 {
            continue;
        }
        let (Ok(inner_avg), Ok(outer_avg)) = (
            circle_log_integral(&poly, r),
            circle_log_integral(&poly, outer),
        ) else {
            continue;
        };
        let annulus: f64 = roots
            .iter()
            .map(|z| z.norm())
            .filter(|&m| r < m && m < outer)
            .map(|m| (outer / m).ln())
            .sum();
        let inside = roots.iter().filter(|z| z.norm() < r).count() as f64;
        let lhs = annulus + inside * kappa.ln();
        worst = worst.max((lhs - (outer_avg - inner_avg)).abs());
        used += 1;
    }
    SuiteReport::new(
        "zeros.two_radius_jensen",
        "zeros between r = 1 and 1.2r against the difference of circle averages; max error",
        worst,
        1e-6,
    )
}

fn subharmonic(seed: u64) -> SuiteReport {
    let mut rng = SplitMix64::new(seed.wrapping_add(7));
    let mut worst = f64::NEG_INFINITY;
    for i in 0..40 {
        let poly = instance(seed, 7000 + i, 30);
        let r = [0.5, 1.0, 2.0][(i % 3) as usize];
        let zeta = rng.point_in_disk(0.5 * r);
        if let Ok(avg) = poisson_log_average(&poly, zeta, r) {
            worst = worst.max(poly.log_modulus(zeta) - avg);
        }
    }
    SuiteReport::new(
        "zeros.subharmonic",
        "log|ψ(ζ)| minus its Poisson average for |ζ| ≤ r/2; max excess",
        worst,
        1e-8,
    )
}

fn poisson_mean_one(_seed: u64) -> SuiteReport {
    let m = 4096;
    let mut worst: f64 = 0.0;
    for r in [0.5, 1.0, 3.0] {
        for zeta in [
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(0.5 * r, 1.0),
            Complex64::from_polar(0.9 * r, -2.0),
        ] {
            let mean = (0..m)
                .map(|k| {
                    let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
                    poisson_kernel(zeta, z, r).expect("ζ inside")
                })
                .sum::<f64>()
                / m as f64;
            worst = worst.max((mean - 1.0).abs());
        }
    }
    SuiteReport::new(
        "zeros.poisson_mean_one",
        "boundary average of the Poisson kernel; max deviation from 1",
        worst,
        1e-10,
    )
}

fn omega_dominance(seed: u64) -> SuiteReport {
    let mut worst = f64::NEG_INFINITY;
    for (n, r) in [(1usize, 1.0), (2, 0.5), (3, 0.5), (4, 0.3)] {
        let plan = TrialPlan::new(n, r, 20_000, seed).expect("valid plan");
        let hole = estimate_hole_probability(&plan).expect("reliable");
        let bound = omega_lower_bound(n, r).expect("N ≥ 1").exp();
        worst = worst.max(bound - hole.point - 3.0 * hole.stderr);
    }
    SuiteReport::new(
        "montecarlo.omega_dominance",
        "exp(ln P(Ω)) − hole estimate − 3 stderr; max",
        worst,
        0.0,
    )
}

fn hole_within_deviation(seed: u64) -> SuiteReport {
    let mut violations = 0u64;
    for (n, r) in [(4usize, 0.5), (8, 0.7), (6, 1.0)] {
        let plan = TrialPlan::new(n, r, 5_000, seed).expect("valid plan");
        let r2 = r * r / (1.0 + r * r);
        let expected = n as f64 * r2;
        let threshold = r2 * 0.5 * n as f64;
        let tally: EventTally<1> = run_trials(plan.trials, plan.workers, |i| {
            let xi = trial_zero_count(&plan.sample(i), r, Counter::Roots, &plan.tolerances)?;
            let deviates = (xi as f64 - expected).abs() >= threshold;
            Some([xi == 0 && !deviates])
        });
        violations += tally.hits[0];
    }
    SuiteReport::new(
        "montecarlo.hole_within_deviation",
        "trials with a hole but no zero-count deviation; count",
        violations as f64,
        0.0,
    )
}

fn reversal_symmetry(seed: u64) -> SuiteReport {
    let mut worst: f64 = 0.0;
    for (n, r) in [(3usize, 0.8), (5, 0.6)] {
        let plan = TrialPlan::new(n, r, 20_000, seed).expect("valid plan");
        let hole = estimate_hole_probability(&plan).expect("reliable");
        let outer = plan.with_radius(1.0 / r).with_degree(n);
        let full = estimate_count_event(
            &TrialPlan {
                master_seed: seed ^ 0x5555,
                ..outer
            },
            Counter::ArgumentPrinciple,
            |xi| xi == n,
        )
        .expect("reliable");
        let se = pooled_stderr(&hole, &full);
        worst = worst.max((hole.point - full.point).abs() / se);
    }
    SuiteReport::new(
        "montecarlo.reversal_symmetry",
        "P(no zero in B(0,r)) against P(all zeros in B(0,1/r)); max gap in pooled stderr",
        worst,
        3.0,
    )
}

fn worker_invariance(seed: u64) -> SuiteReport {
    let plan = TrialPlan::new(6, 0.8, 4_000, seed).expect("valid plan");
    let base = estimate_hole_probability(&plan.with_workers(1)).expect("reliable");
    let mut differ = 0u32;
    for w in [2, 3, 5] {
        let other = estimate_hole_probability(&plan.with_workers(w)).expect("reliable");
        differ += u32::from(other != base);
    }
    SuiteReport::new(
        "montecarlo.worker_invariance",
        "hole estimate under 1, 2, 3 and 5 workers; differing results",
        differ as f64,
        0.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_match() {
        let ids = suite_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        for (id, f) in SUITES {
            assert_eq!(f(1).id, *id);
        }
    }

    #[test]
    fn match_distance_pairs_points() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)];
        let b = [Complex64::new(0.0, 2.0), Complex64::new(1.0, 1e-12)];
        assert!(match_distance(&a, &b) < 1e-11);
        assert!(match_distance(&a, &b[..1]).is_infinite());
    }
}
