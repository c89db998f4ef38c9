use thiserror::Error;

use crate::lattice::Surface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("surface tag mismatch: {0:?} vs {1:?}")]
    TagMismatch(Surface, Surface),

    #[error("unknown class name `{0}`")]
    UnknownClass(String),

    #[error("class lies outside the admissible span: {0}")]
    OutsideSpan(String),

    #[error("unsupported direction for the fiberwise transform: {0}")]
    UnsupportedDirection(String),

    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),

    #[error("negative genus for r = {r}, m = {m}")]
    NegativeGenus { r: i64, m: i64 },

    #[error("unsupported rank {0}")]
    UnsupportedRank(i64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("polarization is not certified ample: {0}")]
    NotAmple(String),

    #[error("k = 2k3 - 3k2 must be nonzero (k2 = {k2}, k3 = {k3})")]
    ZeroK { k2: i64, k3: i64 },

    #[error("(k2, k3) = ({k2}, {k3}) is not an admissible row")]
    NotInTable { k2: i64, k3: i64 },

    #[error("character is not in the kernel lattice")]
    NotInLattice,

    #[error("certificate mismatch: {0}")]
    Tamper(String),
}

pub type Result<T> = std::result::Result<T, Error>;
