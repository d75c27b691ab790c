//! Numerical kernel for one-parameter modular flows in two-dimensional
//! light-cone geometry and for the operators that generate them.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * [`lcgeom`]: light-cone coordinates, open regions, and the massless
//!   reference flows (boosts, dilations, the conformal double-cone flow).
//! * [`byflow`]: the thermal flows `nu_plus` / `nu_minus` at inverse
//!   temperature `beta`, with eager admissibility checks.
//! * [`specfun`]: sampled functions on uniform periodic grids, a fixed
//!   Fourier convention, spectral derivatives, Fourier multipliers and the
//!   iterated (Cauchy) integral.
//! * [`bygen`]: the generators of the thermal flows for every scaling
//!   dimension, the Richardson finite-difference oracle they are checked
//!   against, and support-leakage measurements.
//! * [`yngvason`]: the one-particle wedge flow of the massive model, its
//!   generator and the oracle decomposition into boost and order-zero parts.
//! * [`symcheck`]: sampled falsification checks for symbol-class estimates.
#![no_std]
#![warn(missing_debug_implementations)]
// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod byflow;
pub mod bygen;
pub mod diff;
mod error;
mod fft;
pub mod lcgeom;
pub mod specfun;
pub mod symcheck;
pub mod yngvason;

pub use error::{Coordinate, Error, Result};
pub use num_complex::Complex64;

/// A closed or open real interval `[lo, hi]`; openness is decided by the
/// caller that interprets it.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn contains_open(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn contains_closed(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Relative discrepancy `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
