//! Log-domain binomials and a few stable elementary helpers.

use crate::model::ModelError;

/// `ln binom(n, j)` by summing `ln((n - k + i) / i)` for `i = 1..=k`, `k = min(j, n - j)`.
pub fn log_binomial(n: usize, j: usize) -> Result<f64, ModelError> {
    if j > n {
        return Err(ModelError::Domain(format!(
            "binomial index j={j} outside [0, {n}]"
        )));
    }
    let k = j.min(n - j);
    let mut acc = 0.0;
    let mut comp = 0.0;
    for i in 1..=k {
        let term = (((n - k + i) as f64) / (i as f64)).ln();
        // Neumaier summation
        let t = acc + term;
        if acc.abs() >= term.abs() {
            comp += (acc - t) + term;
        } else {
            comp += (term - t) + acc;
        }
        acc = t;
    }
    Ok(acc + comp)
}

/// The full row `ln binom(n, j)` for `j = 0..=n`, built from the left half and mirrored.
pub fn log_binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![0.0; n + 1];
    for j in 1..=n / 2 {
        row[j] = row[j - 1] + (((n - j + 1) as f64) / (j as f64)).ln();
    }
    for j in n / 2 + 1..=n {
        row[j] = row[n - j];
    }
    row
}

/// `ln(1 - e^{-x})` for `x > 0`, accurate at both ends.
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    if x <= std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// `ln(1 - e^{-x})` given `ln x`, so that `x` below the subnormal range still works.
pub fn ln_one_minus_exp_neg_from_log(log_x: f64) -> f64 {
    if log_x < -30.0 {
        // ln(1 - e^{-x}) = ln x - x/2 + O(x^2)
        log_x - 0.5 * log_x.exp()
    } else {
        ln_one_minus_exp_neg(log_x.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn exact_log_binomial(n: u64, j: u64) -> f64 {
        let mut num = BigUint::from(1u32);
        for i in 0..j {
            num *= n - i;
        }
        for i in 1..=j {
            num /= i;
        }
        // ln of a big integer via its leading bits
        let bits = num.bits();
        if bits <= 1000 {
            let digits = num.to_string();
            let lead: f64 = digits[..digits.len().min(17)].parse().unwrap();
            lead.ln() + (digits.len().saturating_sub(17)) as f64 * std::f64::consts::LN_10
        } else {
            unreachable!()
        }
    }

    #[test]
    fn small_cases() {
        assert!((log_binomial(4, 2).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(log_binomial(3, 4).is_err());
    }

    #[test]
    fn matches_big_integer_oracle() {
        let exact = exact_log_binomial(50, 25);
        let got = log_binomial(50, 25).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-12, "{got} vs {exact}");
        for (n, j) in [(100, 3), (300, 150), (997, 401), (60, 59)] {
            let exact = exact_log_binomial(n, j);
            let got = log_binomial(n as usize, j as usize).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-12, "({n},{j})");
        }
    }

    #[test]
    fn row_agrees_with_pointwise() {
        for n in [0usize, 1, 2, 7, 64, 333, 1000] {
            let row = log_binomial_row(n);
            for (j, v) in row.iter().enumerate() {
                let p = log_binomial(n, j).unwrap();
                assert!((v - p).abs() <= 1e-12 * p.abs().max(1.0), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn ln_one_minus_exp_branches() {
        for x in [1e-300, 1e-20, 1e-3, 0.5, LN2_PLUS, 3.0, 40.0] {
            let direct = (1.0 - (-x).exp()).ln();
            let got = ln_one_minus_exp_neg(x);
            if x > 1e-3 {
                assert!((got - direct).abs() < 1e-13 * direct.abs() + 1e-16, "x={x}");
            }
            let via_log = ln_one_minus_exp_neg_from_log(x.ln());
            assert!(
                (via_log - got).abs() <= 1e-12 * got.abs().max(1e-20),
                "x={x}"
            );
        }
        // far below the subnormal range
        assert!((ln_one_minus_exp_neg_from_log(-2000.0) + 2000.0).abs() < 1e-12);
    }

    const LN2_PLUS: f64 = 0.6931471805599454;
}
