use thiserror::Error;

use crate::lattice::SignatureTriple;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid ample class: {0}")]
    InvalidAmple(String),

    #[error("operation requires rank {expected}, lattice has rank {found}")]
    InvalidRank { expected: String, found: usize },

    #[error("rank {0} is not supported by this operation")]
    UnsupportedRank(usize),

    #[error("degenerate lattice: the intersection form has a nontrivial kernel")]
    Degenerate,

    #[error("not a K3 Picard lattice: signature {0} is not hyperbolic")]
    NotHyperbolic(SignatureTriple),

    #[error("Hodge index violation: {0}")]
    HodgeIndex(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("lattice is not isometric to either exceptional rank-4 lattice")]
    UnrecognizedLattice,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
