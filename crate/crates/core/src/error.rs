use thiserror::Error;

use crate::kring::RingDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("ring descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch {
        left: RingDescriptor,
        right: RingDescriptor,
    },

    #[error("rank {rank} is not a unit of Z[1/{prime}]")]
    NonUnitRank { rank: String, prime: u32 },

    #[error("operation needs coefficients in Z[1/{expected}], ring has {found:?}")]
    WrongInvertedPrime { expected: u32, found: Option<u32> },

    #[error("augmentation part is not nilpotent (equivariant characters present)")]
    NotNilpotent,

    #[error("coefficient {coeff} violates denominator discipline for inverted prime {prime:?}")]
    DenominatorViolation { coeff: String, prime: Option<u32> },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("presentation is not effective: {0}")]
    NonEffective(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Groebner budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
