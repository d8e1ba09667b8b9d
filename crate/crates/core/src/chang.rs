//! Brute-force verification engines for the structural bounds behind the
//! span learner: the sparse-regime dimension bound r <= 2·alpha·k·log2(k),
//! the classical large-coefficient dimension bound, the in-span weight bound,
//! and coefficient granularity — over exhaustively enumerated small Boolean
//! functions.
//!
//! All pass/fail verdicts are exact. Bounds involving log2(k) for k not a
//! power of two are decided by an integer comparison when possible, a
//! float comparison with a conservative margin otherwise, and an exact
//! big-integer power comparison inside the margin.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2linalg::{enumerate_subspaces, BitVec, Span};
use crate::fourier::{Dyadic, SparseSpectrum, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChangError {
    #[error("subset element {0} is not in the Fourier support")]
    SubsetNotInSupport(String),
    #[error("exhaustive scan limited to 4 variables, got {0}")]
    TooLarge(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Which structural checks a scan runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanCheck {
    Improved,
    Original,
    Weight,
    Granularity,
    All,
}

impl ScanCheck {
    pub fn name(&self) -> &'static str {
        match self {
            ScanCheck::Improved => "improved",
            ScanCheck::Original => "original",
            ScanCheck::Weight => "weight",
            ScanCheck::Granularity => "granularity",
            ScanCheck::All => "all",
        }
    }

    fn runs(&self, which: ScanCheck) -> bool {
        *self == ScanCheck::All || *self == which
    }
}

/// One falsified check inside a scan; the scans are expected to produce none.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Violation {
    pub table_id: u64,
    pub check: String,
    pub quantity: f64,
    pub bound: f64,
}

/// Aggregated scan result. Reports merge associatively, so a scan may be
/// partitioned into independent ranges.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChangReport {
    pub n: usize,
    pub check: String,
    pub functions_checked: u64,
    pub violations: Vec<Violation>,
    /// Largest observed ratio r / (2·alpha·k·log2 k).
    pub max_tightness: f64,
    /// Largest observed ratio r / (sqrt(k)·log2 k).
    pub max_dimension_ratio: f64,
    /// Functions where the base-2 and base-e classical verdicts disagree.
    pub base_disagreements: u64,
}

impl ChangReport {
    fn new(n: usize, check: ScanCheck) -> Self {
        Self {
            n,
            check: check.name().to_string(),
            functions_checked: 0,
            violations: Vec::new(),
            max_tightness: 0.0,
            max_dimension_ratio: 0.0,
            base_disagreements: 0,
        }
    }

    pub fn merge(mut self, other: ChangReport) -> ChangReport {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.check, other.check);
        self.functions_checked += other.functions_checked;
        self.violations.extend(other.violations);
        self.max_tightness = self.max_tightness.max(other.max_tightness);
        self.max_dimension_ratio = self.max_dimension_ratio.max(other.max_dimension_ratio);
        self.base_disagreements += other.base_disagreements;
        self
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Outcome of the sparse-regime dimension check on one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ImprovedChangOutcome {
    pub holds: bool,
    pub r: usize,
    pub alpha: Dyadic,
    pub bound_value: f64,
    pub slack: f64,
    pub tightness: f64,
}

/// Fraction of inputs where the function is -1, computed from the constant
/// coefficient: alpha = (1 - f̂(0^n)) / 2, exact.
pub fn alpha_of(s: &SparseSpectrum) -> Dyadic {
    (Dyadic::ONE - s.coeff(&BitVec::zeros(s.n()))) * Dyadic::new(1, 1)
}

/// Checks r <= 2·alpha·k·log2(k) with k = max(2, sparsity). The verdict is
/// exact; the reported bound, slack, and tightness are floats.
pub fn verify_improved_chang(s: &SparseSpectrum) -> ImprovedChangOutcome {
    let k = s.k_effective() as u64;
    let r = s.fourier_dim();
    let alpha = alpha_of(s);
    debug_assert!(alpha >= Dyadic::ZERO && alpha <= Dyadic::ONE);
    let a = alpha.num() as u128;
    let m = alpha.log2_den();
    let holds = le_mul_log2((r as u128) << m, 2 * a * k as u128, k);
    let bound_value = 2.0 * alpha.to_f64() * k as f64 * (k as f64).log2();
    let slack = bound_value - r as f64;
    let tightness = if r == 0 {
        0.0
    } else {
        r as f64 / bound_value
    };
    ImprovedChangOutcome {
        holds,
        r,
        alpha,
        bound_value,
        slack,
        tightness,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Two,
    E,
}

/// Classical large-coefficient dimension bound: checks
/// dim(span{S : |f̂(S)| >= rho·alpha}) <= 2·log(1/alpha) / rho² in the chosen
/// log base. Constant functions (alpha = 0 or 1 with empty large set) hold
/// trivially. `rho` is the exact rational rho_num / rho_den.
pub fn verify_chang_original(
    s: &SparseSpectrum,
    rho_num: u64,
    rho_den: u64,
    base: LogBase,
) -> Result<bool, ChangError> {
    if rho_num == 0 || rho_den == 0 {
        return Err(ChangError::InvalidParameter("rho must be positive".into()));
    }
    let alpha = alpha_of(s);
    if alpha.is_zero() {
        return Ok(true);
    }
    let a = alpha.num() as u128;
    let m = alpha.log2_den();
    let (p, q) = (rho_num as u128, rho_den as u128);

    // Threshold test |c| >= rho·alpha by cross-multiplication:
    // |num_c|·q·2^m >= p·a·2^(e_c).
    let mut span = Span::new(s.n());
    for (chr, c) in s.coeffs() {
        let lhs = c.num().unsigned_abs() as u128 * q * (1u128 << m);
        let rhs = p * a * (1u128 << c.log2_den());
        if lhs >= rhs {
            span.insert(chr);
        }
    }
    let d = span.dim() as u128;

    match base {
        // d·p² + 2q²·log2(a) <= 2·m·q², exactly.
        LogBase::Two => Ok(le_add_log2(d * p * p, 2 * q * q, a as u64, 2 * m as u128 * q * q)),
        // d·p²/q² <= 2·(m·ln2 - ln a); transcendental, decided in floats.
        LogBase::E => {
            let lhs = (d * p * p) as f64 / (q * q) as f64;
            let rhs = 2.0 * (m as f64 * std::f64::consts::LN_2 - (a as f64).ln());
            Ok(lhs <= rhs)
        }
    }
}

/// In-span weight bound: for subset ⊆ supp(f̂) with r' = dim span(subset),
/// checks that the Fourier weight inside span(subset) is at most
/// 1 - (r - r')/(k·log2 k). Exact verdict.
pub fn verify_weight_bound(s: &SparseSpectrum, subset: &[BitVec]) -> Result<bool, ChangError> {
    let mut span = Span::new(s.n());
    for v in subset {
        if !s.contains(v) {
            return Err(ChangError::SubsetNotInSupport(v.to_string()));
        }
        span.insert(v);
    }
    let r = s.fourier_dim();
    let r_prime = span.dim();
    let mut weight = Dyadic::ZERO;
    for (chr, c) in s.coeffs() {
        if span.contains(chr) {
            weight = weight + c.square();
        }
    }
    Ok(weight_bound_holds(
        r,
        r_prime,
        Dyadic::ONE - weight,
        s.k_effective() as u64,
    ))
}

/// Shared comparison: r - r' <= (1 - W)·k·log2(k), exact.
fn weight_bound_holds(r: usize, r_prime: usize, one_minus_w: Dyadic, k: u64) -> bool {
    if r <= r_prime {
        return true;
    }
    if one_minus_w < Dyadic::ZERO {
        return false;
    }
    let gap = (r - r_prime) as u128;
    let lhs = gap << one_minus_w.log2_den();
    let coef = one_minus_w.num() as u128 * k as u128;
    le_mul_log2(lhs, coef, k)
}

/// Ratio r / (sqrt(k)·log2 k) with k = max(2, sparsity); reported as a
/// measurement, not a pass/fail check.
pub fn dimension_ratio(s: &SparseSpectrum) -> f64 {
    let k = s.k_effective() as f64;
    s.fourier_dim() as f64 / (k.sqrt() * k.log2())
}

/// Scans one contiguous range of truth-table ids on n variables. Ranges are
/// independent; merge partial reports with [`ChangReport::merge`].
pub fn scan_range(
    n: usize,
    check: ScanCheck,
    start: u64,
    end: u64,
) -> Result<ChangReport, ChangError> {
    if n > 4 {
        return Err(ChangError::TooLarge(n));
    }
    let table_count = 1u64 << (1 << n);
    assert!(start <= end && end <= table_count, "scan range out of bounds");
    let subspaces = if check.runs(ScanCheck::Weight) {
        Some(subspace_element_masks(n))
    } else {
        None
    };
    let mut report = ChangReport::new(n, check);
    for id in start..end {
        let table = TruthTable::from_id(n, id).expect("scan ids in range");
        let s = table.wht();
        report.functions_checked += 1;

        if check.runs(ScanCheck::Improved) {
            let out = verify_improved_chang(&s);
            report.max_tightness = report.max_tightness.max(out.tightness);
            report.max_dimension_ratio = report.max_dimension_ratio.max(dimension_ratio(&s));
            if !out.holds {
                report.violations.push(Violation {
                    table_id: id,
                    check: "improved".into(),
                    quantity: out.r as f64,
                    bound: out.bound_value,
                });
            }
        }

        if check.runs(ScanCheck::Original) {
            // The sparse instantiation rho·alpha = 1/k: every support element
            // clears the threshold, so the left-hand side is the full
            // Fourier dimension.
            let alpha = alpha_of(&s);
            if !alpha.is_zero() {
                let k = s.k_effective() as u64;
                let rho_num = 1u64 << alpha.log2_den();
                let rho_den = k * alpha.num() as u64;
                let b2 = verify_chang_original(&s, rho_num, rho_den, LogBase::Two)?;
                let be = verify_chang_original(&s, rho_num, rho_den, LogBase::E)?;
                if b2 != be {
                    report.base_disagreements += 1;
                }
                if !b2 || !be {
                    report.violations.push(Violation {
                        table_id: id,
                        check: if b2 { "original-e" } else { "original-2" }.into(),
                        quantity: s.fourier_dim() as f64,
                        bound: 2.0 * (1.0 / alpha.to_f64()).log2()
                            / (rho_num as f64 / rho_den as f64).powi(2),
                    });
                }
            }
        }

        if check.runs(ScanCheck::Weight) {
            scan_weight_for_function(n, id, &s, subspaces.as_ref().unwrap(), &mut report);
        }

        if check.runs(ScanCheck::Granularity) && !s.granularity_check() {
            report.violations.push(Violation {
                table_id: id,
                check: "granularity".into(),
                quantity: s.sparsity() as f64,
                bound: 0.0,
            });
        }
    }
    Ok(report)
}

/// Enumerates every ±1 truth table on n variables (n <= 4) and runs the
/// selected checks against each.
pub fn scan_all(n: usize, check: ScanCheck) -> Result<ChangReport, ChangError> {
    if n > 4 {
        return Err(ChangError::TooLarge(n));
    }
    scan_range(n, check, 0, 1u64 << (1 << n))
}

/// Every subset of the support has the same weight-bound verdict as the
/// subspace it spans, so the scan iterates over subspaces of the ambient
/// space that are generated by support elements instead of over all subsets.
fn scan_weight_for_function(
    n: usize,
    id: u64,
    s: &SparseSpectrum,
    subspaces: &[(usize, u32)],
    report: &mut ChangReport,
) {
    let k = s.k_effective() as u64;
    let r = s.fourier_dim();
    // Scaled coefficients at common denominator 2^n, indexed by character.
    let mut scaled = [0i64; 16];
    let mut supp_mask: u32 = 0;
    for (chr, c) in s.coeffs() {
        let idx = chr.to_index() as usize;
        scaled[idx] = c.num() << (n as u32 - c.log2_den());
        supp_mask |= 1 << idx;
    }
    let total: i128 = 1i128 << (2 * n);
    for &(dim, elem_mask) in subspaces {
        let subset = elem_mask & supp_mask;
        if rank_of_index_set(subset) != dim {
            continue; // not the span of any support subset
        }
        let mut in_span: i128 = 0;
        let mut bits = subset;
        while bits != 0 {
            let idx = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            in_span += (scaled[idx] as i128) * (scaled[idx] as i128);
        }
        let one_minus_w = Dyadic::from_scaled(total - in_span, 2 * n as u32);
        if !weight_bound_holds(r, dim, one_minus_w, k) {
            report.violations.push(Violation {
                table_id: id,
                check: "weight".into(),
                quantity: (in_span as f64) / (total as f64),
                bound: 1.0 - (r - dim) as f64 / (k as f64 * (k as f64).log2()),
            });
        }
    }
}

/// GF(2) rank of the set of character indices flagged in `mask`.
fn rank_of_index_set(mask: u32) -> usize {
    let mut rows: Vec<u32> = Vec::with_capacity(4);
    let mut bits = mask;
    while bits != 0 {
        let mut v = bits.trailing_zeros(); // character index is the vector
        bits &= bits - 1;
        for &row in &rows {
            let lead = 31 - row.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= row;
            }
        }
        if v != 0 {
            rows.push(v);
        }
    }
    rows.len()
}

/// All subspaces of GF(2)^n as (dimension, element-index mask) pairs.
fn subspace_element_masks(n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for d in 0..=n {
        for basis in enumerate_subspaces(n, d).expect("n <= 4") {
            let mut mask: u32 = 0;
            for combo in 0u32..(1 << d) {
                let mut v = BitVec::zeros(n);
                for row in 0..d {
                    if (combo >> row) & 1 == 1 {
                        v.xor_with(basis.row(row));
                    }
                }
                mask |= 1 << v.to_index();
            }
            out.push((d, mask));
        }
    }
    out
}

// --- exact comparisons against c·log2(b) -----------------------------------

const EXACT_FALLBACK_BIT_LIMIT: u128 = 1 << 24;

/// Decides lhs <= coef·log2(base) exactly for integer inputs.
fn le_mul_log2(lhs: u128, coef: u128, base: u64) -> bool {
    assert!(base >= 1);
    if base == 1 {
        return lhs == 0;
    }
    if base.is_power_of_two() {
        return lhs <= coef * base.trailing_zeros() as u128;
    }
    let rhs = coef as f64 * (base as f64).log2();
    let margin = rhs.abs() * 1e-12 + 1e-9;
    let diff = rhs - lhs as f64;
    if diff > margin {
        return true;
    }
    if diff < -margin {
        return false;
    }
    // Inside the margin: compare 2^lhs <= base^coef exactly. The operand
    // guard keeps pathological off-spec inputs from allocating huge integers;
    // scan-scale inputs are tiny here.
    if lhs > EXACT_FALLBACK_BIT_LIMIT || coef > EXACT_FALLBACK_BIT_LIMIT {
        return diff >= 0.0;
    }
    let left = BigUint::one() << (lhs as usize);
    let right = Pow::pow(BigUint::from(base), coef as u64);
    left <= right
}

/// Decides lhs + coef·log2(a) <= rhs exactly for integer inputs, a >= 1.
fn le_add_log2(lhs: u128, coef: u128, a: u64, rhs: u128) -> bool {
    assert!(a >= 1);
    if a == 1 {
        return lhs <= rhs;
    }
    if a.is_power_of_two() {
        return lhs + coef * a.trailing_zeros() as u128 <= rhs;
    }
    let fl = lhs as f64 + coef as f64 * (a as f64).log2();
    let margin = fl.abs() * 1e-12 + 1e-9;
    let diff = rhs as f64 - fl;
    if diff > margin {
        return true;
    }
    if diff < -margin {
        return false;
    }
    if rhs < lhs {
        return false; // a^coef >= 1 always
    }
    let shift = rhs - lhs;
    if shift > EXACT_FALLBACK_BIT_LIMIT || coef > EXACT_FALLBACK_BIT_LIMIT {
        return diff >= 0.0;
    }
    Pow::pow(BigUint::from(a), coef as u64) <= (BigUint::one() << (shift as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::and_table;

    fn and_spectrum(t: usize) -> SparseSpectrum {
        and_table(t).wht()
    }

    fn chi(bits: &str) -> SparseSpectrum {
        SparseSpectrum::from_coeffs(bits.len(), [(bits.parse().unwrap(), Dyadic::ONE)])
    }

    #[test]
    fn improved_bound_on_and3() {
        let out = verify_improved_chang(&and_spectrum(3));
        assert!(out.holds);
        assert_eq!(out.r, 3);
        assert_eq!(out.alpha, Dyadic::new(1, 3));
        assert!((out.bound_value - 6.0).abs() < 1e-12);
        assert!((out.slack - 3.0).abs() < 1e-12);
    }

    #[test]
    fn improved_bound_on_bare_character() {
        let out = verify_improved_chang(&chi("101"));
        assert!(out.holds);
        assert_eq!(out.r, 1);
        assert_eq!(out.alpha, Dyadic::new(1, 1));
        assert!((out.bound_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn improved_bound_on_constants() {
        let plus = SparseSpectrum::from_coeffs(2, [("00".parse().unwrap(), Dyadic::ONE)]);
        let out = verify_improved_chang(&plus);
        assert!(out.holds);
        assert_eq!(out.slack, 0.0);
        let minus = SparseSpectrum::from_coeffs(2, [("00".parse().unwrap(), Dyadic::from_int(-1))]);
        assert!(verify_improved_chang(&minus).holds);
    }

    #[test]
    fn original_bound_on_and2() {
        // alpha = 1/4, rho = 1: dim over |f̂| >= 1/4 is 2, bound is 4.
        let s = and_spectrum(2);
        assert!(verify_chang_original(&s, 1, 1, LogBase::Two).unwrap());
        // Threshold above every nonconstant coefficient: dimension 0.
        assert!(verify_chang_original(&s, 100, 1, LogBase::Two).unwrap());
        assert!(verify_chang_original(&s, 100, 1, LogBase::E).unwrap());
    }

    #[test]
    fn weight_bound_examples() {
        let s = and_spectrum(2);
        // span{01} covers {00, 01}: W = 1/2 <= 7/8.
        let subset: Vec<BitVec> = vec!["01".parse().unwrap()];
        assert!(verify_weight_bound(&s, &subset).unwrap());
        // Full-span subset: bound is 1, always holds.
        let full: Vec<BitVec> = vec!["01".parse().unwrap(), "10".parse().unwrap()];
        assert!(verify_weight_bound(&s, &full).unwrap());
        // Subset not in support is rejected.
        let bad: Vec<BitVec> = vec!["00".parse().unwrap(), "11".parse().unwrap()];
        assert!(verify_weight_bound(&and_spectrum(2), &bad).is_ok());
        let not_supp: Vec<BitVec> = vec!["01".parse().unwrap()];
        assert!(matches!(
            verify_weight_bound(&chi("10"), &not_supp),
            Err(ChangError::SubsetNotInSupport(_))
        ));
    }

    #[test]
    fn dimension_ratio_examples() {
        let two = 2f64;
        assert!((dimension_ratio(&chi("1")) - 1.0 / two.sqrt()).abs() < 1e-12);
        let expect = 3.0 / (8f64.sqrt() * 3.0);
        assert!((dimension_ratio(&and_spectrum(3)) - expect).abs() < 1e-12);
    }

    #[test]
    fn scan_n2_improved_is_clean() {
        let report = scan_all(2, ScanCheck::Improved).unwrap();
        assert_eq!(report.functions_checked, 16);
        assert!(report.holds());
    }

    #[test]
    fn scan_n3_all_checks_clean() {
        let report = scan_all(3, ScanCheck::All).unwrap();
        assert_eq!(report.functions_checked, 256);
        assert!(report.holds(), "violations: {:?}", report.violations);
        assert_eq!(report.base_disagreements, 0);
    }

    #[test]
    fn scan_rejects_large_n() {
        assert!(matches!(
            scan_all(5, ScanCheck::Improved),
            Err(ChangError::TooLarge(5))
        ));
    }

    #[test]
    fn scan_ranges_merge_to_the_full_scan() {
        let full = scan_all(2, ScanCheck::All).unwrap();
        let a = scan_range(2, ScanCheck::All, 0, 7).unwrap();
        let b = scan_range(2, ScanCheck::All, 7, 16).unwrap();
        assert_eq!(a.merge(b), full);
    }

    #[test]
    fn weight_scan_matches_subset_bruteforce_at_n2() {
        // Cross-check the subspace-deduplicated scan against direct
        // enumeration of every subset of the support.
        for id in 0..16u64 {
            let s = TruthTable::from_id(2, id).unwrap().wht();
            let supp: Vec<BitVec> = s.support().cloned().collect();
            let mut any_violation = false;
            for mask in 0u32..(1 << supp.len()) {
                let subset: Vec<BitVec> = supp
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i) & 1 == 1)
                    .map(|(_, v)| v.clone())
                    .collect();
                if !verify_weight_bound(&s, &subset).unwrap() {
                    any_violation = true;
                }
            }
            let report = scan_range(2, ScanCheck::Weight, id, id + 1).unwrap();
            assert_eq!(report.holds(), !any_violation, "id={id}");
        }
    }

    #[test]
    fn exact_log_comparisons_match_bigint_truth() {
        for base in [2u64, 3, 5, 6, 12] {
            for coef in 0u128..20 {
                for lhs in 0u128..80 {
                    let exact = (BigUint::one() << (lhs as usize))
                        <= Pow::pow(BigUint::from(base), coef as u64);
                    assert_eq!(
                        le_mul_log2(lhs, coef, base),
                        exact,
                        "lhs={lhs} coef={coef} base={base}"
                    );
                }
            }
        }
        for a in [1u64, 2, 3, 7] {
            for coef in 0u128..12 {
                for lhs in 0u128..30 {
                    for rhs in 0u128..60 {
                        let exact = (BigUint::one() << (lhs as usize))
                            * Pow::pow(BigUint::from(a), coef as u64)
                            <= (BigUint::one() << (rhs as usize));
                        assert_eq!(
                            le_add_log2(lhs, coef, a, rhs),
                            exact,
                            "lhs={lhs} coef={coef} a={a} rhs={rhs}"
                        );
                    }
                }
            }
        }
    }
}
