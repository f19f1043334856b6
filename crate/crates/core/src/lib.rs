//! Numerical laboratory for Gaussian random SU(2) polynomials
//! `ψ(z) = Σ α_j sqrt(binom(N, j)) z^j` with i.i.d. standard complex Gaussian `α_j`.
//!
//! * [`model`], [`basis`], [`quadrature`]: the polynomial type, stable
//!   evaluation, sampling, the unitary change to ζ-centered bases and the
//!   Fubini–Study inner product.
//! * [`zeros`]: root finding, zero counting in disks, circle averages of
//!   `log|ψ|`, Jensen's formula, maximum modulus and the Poisson kernel.
//! * [`montecarlo`]: trial ensembles (parallel with the `parallel` feature),
//!   zero-count, deviation and hole-probability estimators, the exact
//!   lower-bound event and the `e^{−cN²}` decay fit.
//! * [`verify`]: the invariant suites behind `su2lab verify`.

// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod verify;
pub mod zeros;

pub use basis::{basis_change_matrix, eq2_identity_residual, BasisChangeMatrix};
pub use model::{sample_polynomial, CircleEvaluator, ModelError, SU2Polynomial};
pub use quadrature::fs_inner_product;
pub use rng::RngSeed;
pub use special::log_binomial;
