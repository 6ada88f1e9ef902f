//! Exact arithmetic laboratory for curves over small finite fields.
//!
//! The crate checks identities between point counts, divisor sums and
//! L-series of rank-one systems, Hecke eigenvalues for tori and the
//! stratification of the SL2 Hitchin-type base `(D, b)`.  Everything is
//! computed by exhaustive enumeration with exact arithmetic.

pub mod curve;
pub mod error;
pub mod ff;
pub mod hitchin;
pub mod lab;
pub mod picard;
pub mod zeta;

pub use error::{Error, Result};

/// Default cap on field cardinalities and enumeration sizes.
pub const DEFAULT_CAP: u128 = 1 << 20;
