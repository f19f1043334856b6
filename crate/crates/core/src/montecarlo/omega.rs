use super::McError;
use crate::special::{ln_one_minus_exp_neg_from_log, log_binomial_row};

/// Exact `ln P(Ω)` for the coefficient event
/// `Ω = {|α_0| ≥ N} ∩ ⋂_{j≥1} {|α_j| < binom(N,j)^{−1/2} r^{−j}}`, which forces
/// `|α_0| > Σ_{j≥1} |α_j| sqrt(binom(N,j)) r^j` and hence no zero in `B(0, r)`.
///
/// With `P(|α| ≥ λ) = e^{−λ²}` the log-probability is
/// `−N² + Σ_{j=1}^{N} ln(1 − exp(−x_j))`, `x_j = r^{−2j} / binom(N, j)`.
pub fn omega_lower_bound(n: usize, r: f64) -> Result<f64, McError> {
    if n == 0 {
        return Err(McError::Domain("the Ω event needs N >= 1".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(McError::Domain(format!("radius must be positive, got {r}")));
    }
    let row = log_binomial_row(n);
    let log_r = r.ln();
    let nf = n as f64;
    let tail: f64 = (1..=n)
        .map(|j| ln_one_minus_exp_neg_from_log(-row[j] - 2.0 * j as f64 * log_r))
        .sum();
    Ok(-nf * nf + tail)
}
