//! Exact linear algebra over GF(2): bit-packed vectors and matrices, ranks,
//! inverses, basis completion, span membership, and subspace enumeration.

mod bitvec;
mod matrix;
mod span;
mod subspace;

pub use bitvec::BitVec;
pub use matrix::F2Matrix;
pub use span::{complete_basis, span_contains, Span};
pub use subspace::{enumerate_subspaces, subspace_count, SUBSPACE_ENUM_MAX_DIM};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace enumeration too large: {0}")]
    TooLarge(String),
    #[error("invalid bit string: {0}")]
    ParseBits(String),
}
