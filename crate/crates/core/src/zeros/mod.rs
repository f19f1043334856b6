//! Zeros of a fixed polynomial: locating, counting, and the circle averages
//! of `log|ψ|` that tie them together through Jensen's formula.

mod aberth;
mod circle;
mod poisson;
mod winding;

pub use aberth::{find_all_roots, find_all_roots_with, AberthOptions};
pub use circle::{
    circle_log_integral, circle_log_moments, circle_log_moments_with, jensen_residual,
    max_modulus_boundary, poisson_log_average, CircleLogAverages, MaxModulus,
    LOG_INTEGRAL_NODE_CAP,
};
pub use poisson::{poisson_kernel, poisson_partition_deviation, PARTITION_GRID};
pub use winding::{count_zeros_argument_principle, count_zeros_from_roots};

use crate::model::ModelError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Roots closer than this to a disk boundary are flagged.
pub const BOUNDARY_MARGIN: f64 = 1e-9;
/// Default bound on `|ψ(root)| / (1+|root|²)^{N/2}`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroError {
    Domain(String),
    /// Aberth iteration hit its sweep cap; carries the indices still moving.
    NonConvergence {
        sweeps: usize,
        unconverged: Vec<usize>,
    },
    /// A zero sits on or next to the contour.
    ContourSingularity {
        angle: f64,
    },
    /// Winding number not within 0.01 of an integer.
    Uncertified {
        winding: f64,
    },
    /// Circle average did not settle before the node cap.
    Accuracy {
        best: f64,
        gap: f64,
        nodes: usize,
    },
    Model(ModelError),
}

impl fmt::Display for ZeroError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroError::Domain(msg) => write!(f, "domain error: {msg}"),
            ZeroError::NonConvergence { sweeps, unconverged } => write!(
                f,
                "root finder did not converge after {sweeps} sweeps; unconverged roots {unconverged:?}"
            ),
            ZeroError::ContourSingularity { angle } => {
                write!(f, "zero on or near the contour at angle {angle:.6}")
            }
            ZeroError::Uncertified { winding } => {
                write!(f, "winding number {winding} is not close to an integer")
            }
            ZeroError::Accuracy { best, gap, nodes } => write!(
                f,
                "circle average not converged at {nodes} nodes: best {best}, gap {gap:e}"
            ),
            ZeroError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ZeroError {}

impl From<ModelError> for ZeroError {
    fn from(e: ModelError) -> Self {
        ZeroError::Model(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub location: Complex64,
    /// `|ψ(location)| / (1+|location|²)^{N/2}`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    pub degree: usize,
    pub roots: Vec<Root>,
    /// Roots lost to leading-coefficient truncation (sent to infinity).
    pub degree_deficit: usize,
}

impl ZeroSet {
    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn within_tolerance(&self, tol: f64) -> bool {
        self.roots.iter().all(|r| r.residual <= tol)
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.location).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self, ZeroError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ZeroError::Domain(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// `B(0, r)`
    pub fn centered(radius: f64) -> Result<Self, ZeroError> {
        Self::new(Complex64::new(0.0, 0.0), radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    FromRoots,
    ArgumentPrinciple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: usize,
    pub method: CountMethod,
    /// Roots within [`BOUNDARY_MARGIN`] of the circle (root-based counts only).
    pub boundary_flags: usize,
}
