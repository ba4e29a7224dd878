//! Exact symbolic computation for the Virasoro algebra over the rationals.
//!
//! The layers, bottom up: arbitrary-precision rationals and exact row
//! reduction ([`scalar`], [`linalg`]); the enveloping algebra with its PBW
//! normal form ([`lie`]); cyclic quotients of the nonnegative half and their
//! leading-term descents ([`quotient`]); modules induced from those quotients
//! with a fixed central charge ([`induced`]); finite solvable truncations and
//! their module classification ([`solvable`]); and derivations of polynomial
//! rings ([`witt`]).
//!
//! Everything is computed over ℚ with no floating point, so every check in
//! the test suites is exact.

pub mod induced;
pub mod lie;
pub mod linalg;
pub mod quotient;
pub mod scalar;
pub mod solvable;
pub mod witt;

pub use induced::InducedElement;
pub use lie::{GenIndex, MultiIndex, PBWMonomial, UElement};
pub use quotient::{NElement, QuotientSpec, SpecError};
pub use scalar::Scalar;
