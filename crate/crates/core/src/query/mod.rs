//! Membership-query learning: concept classes as bit-string sets with a
//! distribution, the canonical adversary matrix and its spectral-norm
//! machinery, balanced-split certificates, the entropy-greedy learner, and
//! ensemble energy bookkeeping.

mod adversary;
mod class;
mod greedy;

pub use adversary::{certify_split, spectral_ratio, AdversaryMatrix, SplitCertificate};
pub use class::ConceptClass;
pub use greedy::{
    energy_trace, entropy_greedy_learn, run_all_targets, EnergyTrace, Transcript, TranscriptStep,
    DEFAULT_STOP_MASS,
};

use thiserror::Error;

use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid concept class: {0}")]
    InvalidClass(String),
    #[error("bit index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("distribution too concentrated: max mass {max_mass} > 5/6")]
    TooConcentrated { max_mass: f64 },
    #[error("no concept is consistent with the observed answers")]
    EmptyPosterior,
    #[error("degenerate class: {0}")]
    DegenerateClass(String),
    #[error("power iteration did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("class too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}
