//! Two-phase exact learner for Fourier-sparse Boolean targets.
//!
//! Phase 1 grows a basis of the target's Fourier span from accepted Fourier
//! samples, stopping either when a known dimension bound is reached or after
//! a run of consecutive samples that fail to grow the span. Phase 2 changes
//! basis so the target depends on its first r variables only, then recovers
//! all coefficients from uniform classical examples: either by estimating
//! every reduced coefficient and rounding onto the granularity grid, or by
//! waiting for every reduced input to appear and transforming exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{complete_basis, BitVec, F2Error, F2Matrix, Span};
use crate::fourier::{Dyadic, FourierError, SpanBasis, SparseSpectrum, TruthTable};
use crate::oracle::{ExampleOracle, SampleLog};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("sample budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("rounded spectrum is not a ±1-valued function")]
    NotBooleanResult,
    #[error("conflicting labels observed for one reduced input")]
    InconsistentExamples,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Fourier(#[from] FourierError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase2Mode {
    /// Estimate every reduced coefficient from examples and round onto the
    /// granularity grid.
    EstimateRound,
    /// Collect examples until every reduced input has been observed, then
    /// transform exactly.
    CouponCollector,
}

impl Phase2Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Phase2Mode::EstimateRound => "estimate",
            Phase2Mode::CouponCollector => "coupon",
        }
    }
}

/// Learner parameters. `k` is the sparsity bound the learner is promised
/// (clamped below at 2), `delta` the overall failure budget, split evenly
/// between the phase-1 stopping rule and phase-2 estimation.
#[derive(Debug, Clone)]
pub struct LearnerConfig {
    pub k: usize,
    pub r_bound: Option<usize>,
    pub delta: f64,
    pub phase2_mode: Phase2Mode,
    pub stall_factor: f64,
    pub phase1_cap: u64,
    pub phase2_cap: u64,
    /// Instrumentation: record every accepted Fourier sample.
    pub record_samples: bool,
}

impl LearnerConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            r_bound: None,
            delta: 1.0 / 3.0,
            phase2_mode: Phase2Mode::EstimateRound,
            stall_factor: 3.0,
            phase1_cap: 1_000_000,
            phase2_cap: 10_000_000,
            record_samples: false,
        }
    }

    fn validate(&self) -> Result<(), LearnError> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(LearnError::InvalidConfig(format!(
                "delta = {} not in (0,1)",
                self.delta
            )));
        }
        if self.stall_factor <= 0.0 {
            return Err(LearnError::InvalidConfig("stall_factor must be positive".into()));
        }
        Ok(())
    }

    fn k_effective(&self) -> usize {
        self.k.max(2)
    }
}

/// Consecutive in-span accepted samples tolerated before phase 1 stops when
/// no dimension bound is known. Grows with k·log2(k) because the escape
/// probability of an incomplete span is at least 1/(k·log2 k), and with
/// log(r_max/delta1) to drive the miss probability below the phase-1 budget.
pub fn stall_limit(cfg: &LearnerConfig, n: usize) -> u64 {
    let k = cfg.k_effective() as f64;
    let r_max = r_max_bound(cfg.k_effective(), n) as f64;
    let delta1 = cfg.delta / 2.0;
    (cfg.stall_factor * k * k.log2() * (r_max / delta1).ln()).ceil() as u64
}

/// Dimension cap used by the stall rule: min(n, ceil(2·sqrt(k)·log2 k)).
pub fn r_max_bound(k: usize, n: usize) -> usize {
    let k = k.max(2) as f64;
    let cap = (2.0 * k.sqrt() * k.log2()).ceil() as usize;
    cap.min(n).max(1)
}

/// Phase-1 outcome: the accumulated span basis, in acceptance order, plus
/// optionally every accepted sample for instrumentation.
#[derive(Debug, Clone)]
pub struct SpanOutcome {
    pub span: SpanBasis,
    pub accepted_samples: Vec<BitVec>,
}

/// Learns the Fourier span of the oracle's target from Fourier samples.
///
/// Every accepted sample outside the current span is appended to the basis.
/// Stops immediately when `r_bound` is reached, otherwise after `stall_limit`
/// consecutive accepted samples inside the span.
pub fn learn_span(oracle: &mut ExampleOracle, cfg: &LearnerConfig) -> Result<SpanOutcome, LearnError> {
    cfg.validate()?;
    let n = oracle.n();
    let limit = stall_limit(cfg, n);
    let mut span = Span::new(n);
    let mut accepted_samples = Vec::new();
    let mut stall = 0u64;
    let mut used = 0u64;
    loop {
        if let Some(r_bound) = cfg.r_bound {
            if span.dim() >= r_bound {
                break;
            }
        }
        if stall >= limit {
            break;
        }
        if used >= cfg.phase1_cap {
            return Err(LearnError::BudgetExhausted(format!(
                "phase 1 consumed {used} quantum examples"
            )));
        }
        used += 1;
        let Some(s) = oracle.fourier_sample() else {
            continue;
        };
        if cfg.record_samples {
            accepted_samples.push(s.clone());
        }
        if span.insert(&s) {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    Ok(SpanOutcome {
        span: SpanBasis::new(n, span.basis().to_vec()),
        accepted_samples,
    })
}

/// Maps an n-variable example to an r-variable one: z is the first r bits of
/// Bᵀx and the label is unchanged.
pub fn reduce_example(x: &BitVec, y: i8, b: &F2Matrix, r: usize) -> (BitVec, i8) {
    (b.transpose_mul_vec(x).prefix(r), y)
}

/// Number of reduced examples the estimating phase 2 draws.
pub fn phase2_sample_size(k: usize, r: usize, delta: f64) -> u64 {
    let k = k.max(2) as f64;
    let budget = 8.0 * k * k * (r as f64 * std::f64::consts::LN_2 + (2.0 * 4f64.powi(r as i32) / delta).ln());
    budget.ceil() as u64
}

/// Recovers the reduced spectrum by estimating every coefficient as an
/// empirical correlation and rounding it to the nearest multiple of the
/// granularity grid step 2^(1 - floor(log2 k)).
pub fn phase2_estimate(
    oracle: &mut ExampleOracle,
    b: &F2Matrix,
    r: usize,
    k: usize,
    delta: f64,
    cap: u64,
) -> Result<SparseSpectrum, LearnError> {
    let k = k.max(2);
    let m = phase2_sample_size(k, r, delta);
    if m > cap {
        return Err(LearnError::BudgetExhausted(format!(
            "phase 2 needs {m} examples, cap is {cap}"
        )));
    }
    // Accumulate label sums per reduced input, then transform once.
    let mut sums = vec![0i64; 1 << r];
    for _ in 0..m {
        let (x, y) = oracle.uniform_example();
        let (z, y) = reduce_example(&x, y, b, r);
        sums[z.to_index() as usize] += y as i64;
    }
    walsh_in_place(&mut sums);
    let grid = (k as u64).ilog2() - 1; // coefficient = q / 2^grid
    let mut pairs = Vec::new();
    for (idx, &corr) in sums.iter().enumerate() {
        // Round corr/m to the nearest multiple of 2^-grid, half away from 0.
        let t = (corr as i128) << grid;
        let m = m as i128;
        let q = if t >= 0 {
            (2 * t + m) / (2 * m)
        } else {
            -((2 * (-t) + m) / (2 * m))
        };
        if q != 0 {
            pairs.push((
                BitVec::from_index(idx as u64, r),
                Dyadic::new(q as i64, grid),
            ));
        }
    }
    let spectrum = SparseSpectrum::from_coeffs(r, pairs);
    if !spectrum.is_boolean() {
        return Err(LearnError::NotBooleanResult);
    }
    Ok(spectrum)
}

/// Recovers the reduced spectrum exactly by waiting until every reduced
/// input has been observed and transforming the assembled table. Conflicting
/// labels for one input mean the span (and hence the reduction) was wrong.
pub fn phase2_coupon(
    oracle: &mut ExampleOracle,
    b: &F2Matrix,
    r: usize,
    cap: u64,
) -> Result<SparseSpectrum, LearnError> {
    let mut seen: Vec<Option<i8>> = vec![None; 1 << r];
    let mut remaining = seen.len();
    let mut used = 0u64;
    while remaining > 0 {
        if used >= cap {
            return Err(LearnError::BudgetExhausted(format!(
                "phase 2 consumed {used} classical examples"
            )));
        }
        used += 1;
        let (x, y) = oracle.uniform_example();
        let (z, y) = reduce_example(&x, y, b, r);
        match seen[z.to_index() as usize] {
            None => {
                seen[z.to_index() as usize] = Some(y);
                remaining -= 1;
            }
            Some(prev) if prev != y => return Err(LearnError::InconsistentExamples),
            Some(_) => {}
        }
    }
    let values: Vec<i8> = seen.into_iter().map(Option::unwrap).collect();
    let table = TruthTable::new(r, values)?;
    Ok(table.wht())
}

fn walsh_in_place(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        let mut start = 0;
        while start < a.len() {
            for j in start..start + h {
                let (x, y) = (a[j], a[j + h]);
                a[j] = x + y;
                a[j + h] = x - y;
            }
            start += 2 * h;
        }
        h *= 2;
    }
}

/// Result of an end-to-end run: the recovered spectrum on n variables, the
/// learned span, the completed basis matrix, the resource log, and the
/// learner's own validation verdict.
#[derive(Debug, Clone)]
pub struct LearnerResult {
    pub spectrum: SparseSpectrum,
    pub span: SpanBasis,
    pub basis_matrix: F2Matrix,
    pub log: SampleLog,
    pub success_selfreport: bool,
}

/// Runs both phases: learns the span, completes it to a basis, recovers the
/// reduced spectrum with the configured phase 2, and plants it back into n
/// variables. The recovered spectrum is exact whenever the span was complete
/// and phase 2 succeeded.
pub fn learn(oracle: &mut ExampleOracle, cfg: &LearnerConfig) -> Result<LearnerResult, LearnError> {
    cfg.validate()?;
    let n = oracle.n();
    let k = cfg.k_effective();

    oracle.set_stream(1);
    let phase1 = learn_span(oracle, cfg)?;
    let r = phase1.span.dim();
    let b = complete_basis(phase1.span.vectors(), n)?;

    oracle.set_stream(2);
    let reduced = match cfg.phase2_mode {
        Phase2Mode::EstimateRound => {
            phase2_estimate(oracle, &b, r, k, cfg.delta / 2.0, cfg.phase2_cap)?
        }
        Phase2Mode::CouponCollector => phase2_coupon(oracle, &b, r, cfg.phase2_cap)?,
    };

    let spectrum = reduced.lift(&b)?;
    let success_selfreport = spectrum.sparsity() <= k
        && spectrum.granularity_check()
        && spectrum.parseval_sum().is_one()
        && spectrum.fourier_dim() == r;
    Ok(LearnerResult {
        spectrum,
        span: phase1.span,
        basis_matrix: b,
        log: oracle.log().clone(),
        success_selfreport,
    })
}

/// One experiment row, as emitted by the harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub r_true: usize,
    pub r_found: usize,
    pub phase1_quantum_examples: u64,
    pub phase2_classical_examples: u64,
    pub exact_match: bool,
    pub mode: String,
}
