//! Simulated access models for a hidden target: uniform classical examples,
//! uniform quantum examples consumed through Fourier sampling (with the
//! explicit probability-1/2 rejection), and membership queries. Every
//! consumed resource is accounted in a [`SampleLog`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::BitVec;
use crate::fourier::SparseSpectrum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("target spectrum is not a ±1-valued function")]
    NotBoolean,
    #[error("bit index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Per-run resource accounting. Counters only ever increase.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleLog {
    pub quantum_examples_used: u64,
    pub fourier_samples_accepted: u64,
    pub classical_examples_used: u64,
    pub membership_queries_used: u64,
    pub seed: u64,
}

impl SampleLog {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("log serialization cannot fail")
    }
}

/// Example oracle for a Boolean target spectrum. Owns its seeded RNG stream
/// and its log; one instance serves one worker at a time.
///
/// The generator is ChaCha8 keyed by the seed; callers may switch to an
/// independent sub-stream per phase via [`ExampleOracle::set_stream`]. The
/// acceptance of a Fourier sample and the sampled character come from two
/// separate draws, so the acceptance indicator is independent of the value.
pub struct ExampleOracle {
    target: SparseSpectrum,
    rng: ChaCha8Rng,
    log: SampleLog,
    // Exact cumulative squared-coefficient weights, scaled to sum to 2^(2E).
    cdf: Vec<(BitVec, u128)>,
    total: u128,
}

impl ExampleOracle {
    pub fn new(target: SparseSpectrum, seed: u64) -> Result<Self, OracleError> {
        if !target.is_boolean() {
            return Err(OracleError::NotBoolean);
        }
        let e = target
            .coeffs()
            .map(|(_, c)| c.log2_den())
            .max()
            .unwrap_or(0);
        let mut cdf = Vec::with_capacity(target.sparsity());
        let mut acc: u128 = 0;
        for (s, c) in target.coeffs() {
            let scaled = (c.num().unsigned_abs() as u128) << (e - c.log2_den());
            acc += scaled * scaled;
            cdf.push((s.clone(), acc));
        }
        debug_assert_eq!(acc, 1u128 << (2 * e), "Parseval normalization");
        Ok(Self {
            target,
            rng: ChaCha8Rng::seed_from_u64(seed),
            log: SampleLog::new(seed),
            cdf,
            total: acc,
        })
    }

    pub fn n(&self) -> usize {
        self.target.n()
    }

    /// Simulation-side view of the hidden target, for instrumentation only.
    pub fn target(&self) -> &SparseSpectrum {
        &self.target
    }

    pub fn log(&self) -> &SampleLog {
        &self.log
    }

    /// Switches to an independent RNG sub-stream derived from the same seed.
    pub fn set_stream(&mut self, stream: u64) {
        self.rng.set_stream(stream);
    }

    /// Consumes one quantum example. With probability 1/2 returns a character
    /// S drawn from the squared-coefficient distribution, otherwise rejects
    /// and returns None. The quantum-example counter increments either way.
    pub fn fourier_sample(&mut self) -> Option<BitVec> {
        self.log.quantum_examples_used += 1;
        let accept: bool = self.rng.random();
        let u: u128 = self.rng.random_range(0..self.total);
        let idx = self.cdf.partition_point(|(_, cum)| *cum <= u);
        let s = self.cdf[idx].0.clone();
        if accept {
            self.log.fourier_samples_accepted += 1;
            Some(s)
        } else {
            None
        }
    }

    /// Consumes one classical example: a uniform x with its exact ±1 label.
    pub fn uniform_example(&mut self) -> (BitVec, i8) {
        self.log.classical_examples_used += 1;
        let x = BitVec::random(self.target.n(), &mut self.rng);
        let y = self.target.evaluate(&x);
        debug_assert_eq!(y.abs(), crate::fourier::Dyadic::ONE);
        (x, if y.num() > 0 { 1 } else { -1 })
    }
}

/// Membership-query oracle over an N-bit concept string: reveals one chosen
/// bit per query and counts every call.
pub struct MembershipOracle {
    concept: BitVec,
    log: SampleLog,
}

impl MembershipOracle {
    pub fn new(concept: BitVec) -> Self {
        Self {
            concept,
            log: SampleLog::new(0),
        }
    }

    pub fn len(&self) -> usize {
        self.concept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concept.is_empty()
    }

    pub fn log(&self) -> &SampleLog {
        &self.log
    }

    /// Simulation-side view of the whole concept, for transcripts and
    /// correctness checks; does not count as a query.
    pub fn concept_snapshot(&self) -> BitVec {
        self.concept.clone()
    }

    /// Reads bit `index` (1-based) of the concept.
    pub fn query(&mut self, index: usize) -> Result<bool, OracleError> {
        if index == 0 || index > self.concept.len() {
            return Err(OracleError::IndexOutOfRange {
                index,
                len: self.concept.len(),
            });
        }
        self.log.membership_queries_used += 1;
        Ok(self.concept.get(index - 1))
    }
}
