use super::McError;
use serde::{Deserialize, Serialize};

/// Least-squares fit of `log P` against `N²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `−slope`
    pub c_hat: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(usize, f64)>,
}

pub fn fit_decay_exponent(points: &[(usize, f64)]) -> Result<DecayFit, McError> {
    if points.len() < 3 {
        return Err(McError::Domain(format!(
            "decay fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points.iter().find(|p| !p.1.is_finite()) {
        return Err(McError::Domain(format!(
            "log-probability at N = {} is not finite",
            p.0
        )));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).powi(2)).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(McError::Domain(
            "decay fit needs at least two distinct degrees".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(DecayFit {
        c_hat: -slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}
