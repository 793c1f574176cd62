//! Exact K-theoretic computations on projective bundles in characteristic p.
//!
//! The arithmetic core is generic over an exact [`Scalar`]; the aliases below
//! fix the two supported choices.

pub mod arith;
pub mod equivariant;
pub mod error;
pub mod frobenius;
pub mod kring;
pub mod lambda;
pub mod poly;
pub mod pushforward;
pub mod report;
pub mod scalar;
pub mod split;
pub mod tau;

use num_rational::{BigRational, Rational64};

pub use error::{Error, Result};
pub use kring::{Basis, KElement, RingDescriptor};
pub use report::{Status, VerificationReport};
pub use scalar::Scalar;
pub use split::SplitClass;

/// Arbitrary-precision rationals; the default everywhere.
pub type Q = BigRational;
/// Machine-width rationals; panics on overflow, fine for small geometries.
pub type Q64 = Rational64;

pub type KElem = KElement<Q>;
pub type KElem64 = KElement<Q64>;
