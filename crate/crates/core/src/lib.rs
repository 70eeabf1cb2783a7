//! Arithmetic over GF(2^n) together with exhaustive solvers and checkers for
//! the differential properties of Kasami-type power functions.
//!
//! The crate is split along the objects it manipulates:
//!
//! * [`gf2n`] — field construction and element arithmetic (2 ≤ n ≤ 28),
//! * [`equations`] — the projective-polynomial equation `X^{q+1} + X + a = 0`
//!   and its affine variant, including the three-root witness parameterization,
//! * [`kasami`] — differential spectra, APN tests, the known APN exponent
//!   catalog, and the reduction machinery tying power-function derivatives to
//!   the affine equation,
//! * [`report`] — serializable verification reports shared with the CLI.

pub mod equations;
pub mod gf2n;
pub mod kasami;
pub mod report;

mod error;

pub use error::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
