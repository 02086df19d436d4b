//! Exact integration of polynomials over convex rational polytopes.
//!
//! Integrands are rewritten as sums of powers of linear forms
//! ([`polynomial`]) and integrated either over a triangulation of the
//! polytope or over triangulations of its tangent cones ([`integrate`]).
//! Everything is computed with arbitrary-precision rationals, so the results
//! are exact.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line driver and parallel evaluation live in the `integrale` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod integrate;
pub mod linalg;
pub mod polyhedra;
pub mod polynomial;
pub mod series;

pub use error::{ComputeError, Error, GeometryError, ParseError};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// The exact scalar used everywhere.
pub type Rational = BigRational;

/// A point or direction with rational coordinates.
pub type Point = alloc::vec::Vec<Rational>;
