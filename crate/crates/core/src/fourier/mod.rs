//! Exact Fourier analysis of Boolean functions: transforms, sparse spectra
//! over dyadic rationals, basis change, restriction, lifting, granularity,
//! and generation of sparse test functions.

mod dyadic;
mod generate;
mod spectrum;
mod table;

pub use dyadic::Dyadic;
pub use generate::{addressing_table, and_table, random_sparse_function, MAX_GENERATOR_CORE};
pub use spectrum::{SpanBasis, SparseSpectrum};
pub use table::{TruthTable, MAX_TABLE_VARS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    #[error("dense evaluation limited to 20 variables, got {0}")]
    TooManyVariables(usize),
    #[error("truth table on {n} variables needs 2^{n} entries, got {len}")]
    BadTableLength { n: usize, len: usize },
    #[error("truth table entries must be +1 or -1")]
    NotPlusMinusOne,
    #[error("spectrum does not evaluate to ±1 everywhere")]
    NotBoolean,
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("declared sparsity {declared} below actual {actual}")]
    SparsityExceeded { declared: usize, actual: usize },
    #[error("no function with sparsity <= {k} and Fourier dimension {r_core} exists")]
    Unsatisfiable { k: usize, r_core: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
