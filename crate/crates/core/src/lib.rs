//! Simulation laboratory for exact learning of Fourier-sparse Boolean
//! functions and entropy-greedy membership-query learning.
//!
//! The crate is organized around exact arithmetic: GF(2) linear algebra on
//! bit-packed vectors ([`f2linalg`]), dyadic-rational Fourier analysis of
//! Boolean functions ([`fourier`]), seeded sampling oracles that account
//! every consumed resource ([`oracle`]), the two-phase span-then-recover
//! learner ([`learner`]), brute-force verifiers for the structural bounds the
//! learner rests on ([`chang`]), and the adversary-bound machinery plus
//! entropy-greedy learner for membership queries ([`query`]).

pub mod chang;
pub mod f2linalg;
pub mod fourier;
pub mod learner;
pub mod oracle;
pub mod query;

pub use f2linalg::{BitVec, F2Matrix, Span};
pub use fourier::{Dyadic, SpanBasis, SparseSpectrum, TruthTable};
pub use oracle::{ExampleOracle, MembershipOracle, SampleLog};
