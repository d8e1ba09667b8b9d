use serde::{Deserialize, Serialize};

use crate::f2linalg::BitVec;
use crate::oracle::MembershipOracle;

use super::{ConceptClass, QueryError};

/// Default posterior mass at which the learner commits to a concept.
pub const DEFAULT_STOP_MASS: f64 = 5.0 / 6.0;

/// One query of a learning run. `posterior_entropy` is the entropy of the
/// posterior after observing the answer (this branch only); `query_entropy`
/// is the answer-bit entropy under the posterior before the query, i.e. the
/// greedy objective value of the chosen coordinate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub t: usize,
    pub index: usize,
    pub bit: bool,
    pub posterior_size: usize,
    pub max_mass: f64,
    pub posterior_entropy: f64,
    pub query_entropy: f64,
    pub halted: bool,
}

/// Full record of one learning run against one target concept.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub target: BitVec,
    pub steps: Vec<TranscriptStep>,
    pub final_concept: BitVec,
    pub correct: bool,
}

impl Transcript {
    pub fn queries(&self) -> usize {
        self.steps.len()
    }
}

/// Learns the target behind `oracle` by repeatedly querying the coordinate
/// whose answer bit has maximum entropy under the current posterior
/// (smallest index on ties), restricting to consistent concepts, and
/// stopping once some concept reaches posterior mass `stop_mass`.
pub fn entropy_greedy_learn(
    cc: &ConceptClass,
    oracle: &mut MembershipOracle,
    stop_mass: f64,
) -> Result<Transcript, QueryError> {
    if oracle.len() != cc.n_bits() {
        return Err(QueryError::InvalidClass(
            "oracle length differs from class".into(),
        ));
    }
    let mut active: Vec<usize> = (0..cc.len()).collect();
    let mut mass: Vec<f64> = cc.mu().to_vec();
    normalize_or_uniform(&mut mass, &active);

    let mut steps = Vec::new();
    let mut t = 0;
    loop {
        let (max_idx, max_mass) = posterior_max(&active, &mass);
        if max_mass >= stop_mass {
            let final_concept = cc.concept(max_idx).clone();
            return Ok(Transcript {
                target: recover_target(oracle),
                steps,
                correct: oracle_matches(oracle, &final_concept),
                final_concept,
            });
        }
        debug_assert!(t < cc.n_bits(), "more queries than coordinates");

        // Greedy choice: coordinate with maximum answer entropy. One pass
        // over the active concepts accumulates the one-mass of every
        // coordinate at once.
        let mut ones = vec![0.0f64; cc.n_bits()];
        for &ci in &active {
            for coord in cc.concept(ci).ones() {
                ones[coord] += mass[ci];
            }
        }
        let mut best = (0usize, -1.0f64);
        for (coord, &p1) in ones.iter().enumerate() {
            let h = binary_entropy(p1);
            if h > best.1 {
                best = (coord, h);
            }
        }
        let (coord, query_entropy) = best;
        if query_entropy <= 0.0 {
            // Distinct concepts with positive mass always disagree somewhere,
            // so this means the posterior has already collapsed.
            return Err(QueryError::DegenerateClass(
                "no informative coordinate left".into(),
            ));
        }

        let bit = oracle.query(coord + 1)?;
        active.retain(|&ci| cc.concept(ci).get(coord) == bit);
        if active.is_empty() {
            return Err(QueryError::EmptyPosterior);
        }
        normalize_or_uniform(&mut mass, &active);
        t += 1;
        let (_, new_max) = posterior_max(&active, &mass);
        steps.push(TranscriptStep {
            t,
            index: coord + 1,
            bit,
            posterior_size: active.len(),
            max_mass: new_max,
            posterior_entropy: posterior_entropy(&active, &mass),
            query_entropy,
            halted: new_max >= stop_mass,
        });
    }
}

/// Runs the learner once per concept, each concept as the target.
pub fn run_all_targets(
    cc: &ConceptClass,
    stop_mass: f64,
) -> Result<Vec<Transcript>, QueryError> {
    cc.concepts()
        .iter()
        .map(|target| {
            let mut oracle = MembershipOracle::new(target.clone());
            entropy_greedy_learn(cc, &mut oracle, stop_mass)
        })
        .collect()
}

/// Ensemble energy bookkeeping over one transcript per concept: `energies[t]`
/// is the expected posterior entropy after t queries when the target is drawn
/// from mu (halted branches keep their final entropy), and `drops[t]` is the
/// mu-averaged answer-bit entropy of the queries issued at step t+1. The
/// chain rule makes `energies[t] - energies[t+1]` equal `drops[t]` exactly.
#[derive(Debug, Clone)]
pub struct EnergyTrace {
    pub energies: Vec<f64>,
    pub drops: Vec<f64>,
}

pub fn energy_trace(cc: &ConceptClass, transcripts: &[Transcript]) -> Result<EnergyTrace, QueryError> {
    if transcripts.len() != cc.len() {
        return Err(QueryError::InvalidClass(
            "need exactly one transcript per concept".into(),
        ));
    }
    let horizon = transcripts.iter().map(Transcript::queries).max().unwrap_or(0);
    let e0: f64 = entropy_of(cc.mu());
    let mut energies = vec![0.0; horizon + 1];
    let mut drops = vec![0.0; horizon];
    energies[0] = e0;
    for (target_idx, tr) in transcripts.iter().enumerate() {
        let p = cc.mu()[target_idx];
        if p == 0.0 {
            continue;
        }
        for (t, slot) in energies.iter_mut().enumerate().skip(1) {
            let entropy_at = if t <= tr.steps.len() {
                tr.steps[t - 1].posterior_entropy
            } else {
                tr.steps.last().map_or(e0, |s| s.posterior_entropy)
            };
            *slot += p * entropy_at;
        }
        for (t, step) in tr.steps.iter().enumerate() {
            drops[t] += p * step.query_entropy;
        }
    }
    Ok(EnergyTrace { energies, drops })
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

fn entropy_of(mass: &[f64]) -> f64 {
    -mass
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

fn posterior_entropy(active: &[usize], mass: &[f64]) -> f64 {
    -active
        .iter()
        .map(|&ci| mass[ci])
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

fn posterior_max(active: &[usize], mass: &[f64]) -> (usize, f64) {
    let mut best = (active[0], -1.0);
    for &ci in active {
        if mass[ci] > best.1 {
            best = (ci, mass[ci]);
        }
    }
    best
}

/// Renormalizes the masses of the active concepts; a branch whose surviving
/// concepts all had zero prior mass falls back to uniform over them.
fn normalize_or_uniform(mass: &mut [f64], active: &[usize]) {
    let total: f64 = active.iter().map(|&ci| mass[ci]).sum();
    if total > 0.0 {
        for &ci in active {
            mass[ci] /= total;
        }
    } else {
        let p = 1.0 / active.len() as f64;
        for &ci in active {
            mass[ci] = p;
        }
    }
}

fn recover_target(oracle: &MembershipOracle) -> BitVec {
    // The transcript stores the target for instrumentation; read it back
    // without charging queries by reconstructing from the oracle's view.
    oracle.concept_snapshot()
}

fn oracle_matches(oracle: &MembershipOracle, concept: &BitVec) -> bool {
    oracle.concept_snapshot() == *concept
}
