//! Counter-based random streams.
//!
//! Every Gaussian coefficient is a pure function of `(master_seed,
//! trial_index, j)`. The generator is SplitMix64 used in counter mode: a
//! per-trial key is derived from the master seed and the trial index, and
//! the `n`-th 64-bit output of the stream is `mix64(key + n * GAMMA)`. No
//! state is carried between trials, so the coefficients of trial `i` do not
//! depend on which worker runs it or in what order.
//!
//! Standard complex Gaussians come from the Box–Muller transform written in
//! polar form: with `u1, u2` uniform on `(0, 1]`,
//! `α = sqrt(-ln u1) · exp(2πi·u2)`. Then `|α|²` is exponential with mean 1,
//! so `P(|α| ≥ λ) = exp(-λ²)` exactly, and the real and imaginary parts are
//! independent normals with variance 1/2.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const TRIAL_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maps 64 random bits to a double in `(0, 1]`.
#[inline]
pub fn unit_open_closed(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Identifies one trial's coefficient stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    fn key(&self) -> u64 {
        mix64(mix64(self.master_seed) ^ self.trial_index.wrapping_mul(TRIAL_SALT))
    }

    pub fn stream(&self) -> CoefficientStream {
        CoefficientStream { key: self.key() }
    }
}

/// Random access into one trial's stream.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientStream {
    key: u64,
}

impl CoefficientStream {
    /// The `n`-th raw 64-bit output.
    #[inline]
    pub fn word(&self, n: u64) -> u64 {
        mix64(self.key.wrapping_add(n.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    /// Standard complex Gaussian for coefficient slot `j` (uses words `2j`, `2j+1`).
    #[inline]
    pub fn complex_gaussian(&self, j: u64) -> Complex64 {
        let u1 = unit_open_closed(self.word(2 * j));
        let u2 = unit_open_closed(self.word(2 * j + 1));
        Complex64::from_polar((-u1.ln()).sqrt(), TAU * u2)
    }
}

/// Sequential SplitMix64, for drawing test instances and evaluation points.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform on `(0, 1]`.
    pub fn next_f64(&mut self) -> f64 {
        unit_open_closed(self.next_u64())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as usize
    }

    /// Uniform point in the open disk of the given radius.
    pub fn point_in_disk(&mut self, radius: f64) -> Complex64 {
        let rho = radius * self.next_f64().sqrt();
        Complex64::from_polar(rho, TAU * self.next_f64())
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        Complex64::from_polar((-u1.ln()).sqrt(), TAU * u2)
    }
}
