//! Numerical and symbolic laboratory connecting zero-density counts N(σ,T)
//! of the Riemann zeta function with large values of Dirichlet polynomials.
//!
//! The crate is organized around the chain of reductions between the two
//! worlds:
//!
//! * [`eval`] — exact-contract evaluation of Dirichlet blocks at points and
//!   over large equispaced t-grids, plus partial-summation comparisons.
//! * [`zeta`] — ζ, χ, Γ, ζ′/ζ reference evaluation (Euler–Maclaurin) and the
//!   approximate-functional-equation / convexity / Perron checks.
//! * [`zeros`] — Hardy-Z zero finding, validated zero tables, N(σ,T) and
//!   zero-proximity checks.
//! * [`large_values`] — measured large-value sets R_{σ,η}(T) over t-grids and
//!   the witness-producing reductions between them.
//! * [`detector`] — the mollified zero-detecting pipeline mapping each zero
//!   to a large Dirichlet-polynomial value.
//! * [`exponents`] — exact rational exponent calculus for density profiles
//!   and the inductive bookkeeping behind the main estimate.
//! * [`calib`] — the calibration manifest pinning every otherwise-unspecified
//!   absolute constant.

pub mod calib;
pub mod dd;
pub mod detector;
pub mod error;
pub mod eval;
pub mod exponents;
pub mod large_values;
pub mod sieve;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};

/// Complex values everywhere in the crate are plain 64-bit pairs.
pub type ComplexVal = num_complex::Complex64;
