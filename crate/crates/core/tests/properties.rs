use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use su2lab::montecarlo::{
    fit_decay_exponent, omega_lower_bound, run_trials, Estimate, EventTally, MeanTally,
};
use su2lab::zeros::{count_zeros_from_roots, find_all_roots, Disk};
use su2lab::{sample_polynomial, RngSeed, SU2Polynomial};

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_is_a_pure_function(n in 0usize..40, seed: u64, index: u64) {
        let a = sample_polynomial(n, RngSeed::new(seed, index));
        let b = sample_polynomial(n, RngSeed::new(seed, index));
        prop_assert_eq!(a.coefficients(), b.coefficients());
        prop_assert_eq!(a.degree(), n);
    }

    #[test]
    fn normalized_evaluation_matches_direct(n in 0usize..30, seed: u64, z in complex()) {
        prop_assume!(z.norm() <= 3.0);
        let p = sample_polynomial(n, RngSeed::new(seed, 0));
        let direct = p.evaluate(z).unwrap();
        let scaled = p.evaluate_normalized(z) * (1.0 + z.norm_sqr()).powf(0.5 * n as f64);
        prop_assert!((direct - scaled).norm() <= 1e-10 * direct.norm().max(1e-300) + 1e-300,
            "{direct} vs {scaled}");
    }

    #[test]
    fn normalized_value_is_bounded_by_coefficient_norm(n in 0usize..60, seed: u64, z in complex()) {
        let p = sample_polynomial(n, RngSeed::new(seed, 1));
        let bound = p.coefficients().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(p.evaluate_normalized(z).norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn roots_plus_deficit_is_degree(
        coefficients in prop::collection::vec(complex(), 2..25),
        dropped_top in 0usize..3,
    ) {
        let mut c = coefficients;
        let len = c.len();
        for x in c.iter_mut().skip(len.saturating_sub(dropped_top)).take(len - 1) {
            *x = Complex64::new(0.0, 0.0);
        }
        prop_assume!(c.iter().any(|x| x.norm() > 0.0));
        let p = SU2Polynomial::new(c).unwrap();
        if let Ok(z) = find_all_roots(&p) {
            prop_assert_eq!(z.roots.len() + z.degree_deficit, p.degree());
            prop_assert!(z.degree_deficit >= dropped_top.min(p.degree()));
        }
    }

    #[test]
    fn reversal_swaps_inside_and_outside(n in 1usize..25, seed: u64, r in 0.3..3.0f64) {
        let p = sample_polynomial(n, RngSeed::new(seed, 2));
        let zs = find_all_roots(&p).unwrap();
        let rev = find_all_roots(&p.reverse_coefficients()).unwrap();
        let near = zs.locations().iter().any(|z| (z.norm() - r).abs() < 1e-6 * r);
        prop_assume!(!near);
        let inside = count_zeros_from_roots(&zs, &Disk::centered(r).unwrap()).count;
        let reversed_outside = rev.locations().iter().filter(|z| z.norm() > 1.0 / r).count();
        prop_assert_eq!(inside, reversed_outside);
    }

    #[test]
    fn wilson_interval_holds_the_point(used in 1u64..100_000, frac in 0.0..=1.0f64, failed in 0u64..10) {
        let hits = (used as f64 * frac).floor() as u64;
        let e = Estimate::frequency(hits, used, failed);
        prop_assert!(0.0 <= e.ci95.0 && e.ci95.0 <= e.point && e.point <= e.ci95.1 && e.ci95.1 <= 1.0);
        prop_assert_eq!(e.trials(), used + failed);
    }

    #[test]
    fn omega_bound_sits_below_its_leading_factor(n in 1usize..300, r in 0.05..5.0f64) {
        let v = omega_lower_bound(n, r).unwrap();
        prop_assert!(v.is_finite());
        prop_assert!(v <= -((n * n) as f64));
    }

    #[test]
    fn exact_decay_is_recovered(c in 0.01..5.0f64, b in -3.0..3.0f64) {
        let points: Vec<(usize, f64)> = [3usize, 5, 7, 9, 11]
            .iter()
            .map(|&n| (n, b - c * (n * n) as f64))
            .collect();
        let fit = fit_decay_exponent(&points).unwrap();
        assert_relative_eq!(fit.c_hat, c, max_relative = 1e-9);
        assert_relative_eq!(fit.intercept, b, epsilon = 1e-7);
        prop_assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn tallies_ignore_the_worker_count(trials in 1u64..5000, workers in 2usize..6) {
        let f = |i: u64| {
            let p = sample_polynomial(2, RngSeed::new(77, i));
            (!i.is_multiple_of(13)).then(|| p.coefficients()[1].norm_sqr())
        };
        let a: MeanTally = run_trials(trials, 1, f);
        let b: MeanTally = run_trials(trials, workers, f);
        prop_assert_eq!(a, b);
        let g = |i: u64| Some([i.is_multiple_of(3)]);
        let e: EventTally<1> = run_trials(trials, workers, g);
        prop_assert_eq!(e.hits[0], trials.div_ceil(3));
    }
}
