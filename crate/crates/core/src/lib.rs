//! Two-state quantum walk on the integer line whose coin is swapped for a
//! single step at half-time.
//!
//! The crate evolves the walk exactly in position space ([`dynamics`]),
//! re-derives the same evolution in Fourier space ([`spectral`]), evaluates
//! the closed-form localization limits and the weak limit of `X_t / t`
//! ([`limits`]) and measures how fast finite walks approach them
//! ([`analysis`]). The [`cli`] module backs the `qwalk` binary.
//!
//! ```
//! use qwalk::{coin::{Preset, Schedule, WalkParams}, dynamics, limits};
//! use std::f64::consts::FRAC_PI_4;
//!
//! let [a, b] = Preset::Symmetric.spinor();
//! let params = WalkParams::new(FRAC_PI_4, 0.0, 50, a, b).unwrap();
//! let state = dynamics::evolve(&params, &Schedule::HalfTime, 101).unwrap();
//! let p1 = dynamics::distribution(&state).get(1);
//! let lim = limits::theorem1_limit(&params, 1, limits::Parity::Odd);
//! assert!((p1 - lim).abs() < 0.02);
//! ```

pub mod analysis;
pub mod cli;
pub mod coin;
pub mod dynamics;
pub mod error;
pub mod limits;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
