use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::f2linalg::{BitVec, F2Matrix, Span};

use super::{Dyadic, FourierError, TruthTable, MAX_TABLE_VARS};

/// Exact Fourier representation of a function on {0,1}^n: a map from
/// character (length-n vector over GF(2)) to dyadic coefficient. Zero
/// coefficients are never stored.
///
/// Equality compares the function (ambient dimension and coefficients); the
/// declared sparsity bound is metadata and does not participate.
#[derive(Clone, Eq, Debug)]
pub struct SparseSpectrum {
    n: usize,
    coeffs: BTreeMap<BitVec, Dyadic>,
    k_declared: Option<usize>,
}

impl PartialEq for SparseSpectrum {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.coeffs == other.coeffs
    }
}

/// A basis of the GF(2) span of a spectrum's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanBasis {
    ambient: usize,
    vectors: Vec<BitVec>,
}

impl SpanBasis {
    pub fn new(ambient: usize, vectors: Vec<BitVec>) -> Self {
        debug_assert!({
            let mut s = Span::new(ambient);
            vectors.iter().all(|v| s.insert(v))
        });
        Self { ambient, vectors }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BitVec] {
        &self.vectors
    }
}

impl SparseSpectrum {
    /// Builds a spectrum from (character, coefficient) pairs, dropping zeros.
    /// Pairs with repeated characters are summed.
    pub fn from_coeffs(n: usize, pairs: impl IntoIterator<Item = (BitVec, Dyadic)>) -> Self {
        let mut coeffs: BTreeMap<BitVec, Dyadic> = BTreeMap::new();
        for (s, c) in pairs {
            assert_eq!(s.len(), n, "character length mismatch");
            let entry = coeffs.entry(s).or_insert(Dyadic::ZERO);
            *entry = *entry + c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self {
            n,
            coeffs,
            k_declared: None,
        }
    }

    /// Attaches a sparsity bound; fails if the spectrum already exceeds it.
    pub fn with_declared_sparsity(mut self, k: usize) -> Result<Self, FourierError> {
        if self.coeffs.len() > k {
            return Err(FourierError::SparsityExceeded {
                declared: k,
                actual: self.coeffs.len(),
            });
        }
        self.k_declared = Some(k);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sparsity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn k_declared(&self) -> Option<usize> {
        self.k_declared
    }

    /// Sparsity clamped below at 2; the convention used wherever log2(k)
    /// appears, so that a bare character still counts as a 2-sparse target.
    pub fn k_effective(&self) -> usize {
        self.sparsity().max(2)
    }

    pub fn coeff(&self, s: &BitVec) -> Dyadic {
        self.coeffs.get(s).copied().unwrap_or(Dyadic::ZERO)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&BitVec, &Dyadic)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &BitVec> {
        self.coeffs.keys()
    }

    pub fn contains(&self, s: &BitVec) -> bool {
        self.coeffs.contains_key(s)
    }

    /// Evaluates the Fourier expansion at `x` by direct summation.
    pub fn evaluate(&self, x: &BitVec) -> Dyadic {
        assert_eq!(x.len(), self.n, "input length mismatch");
        let e = self.max_log2_den();
        let mut acc: i128 = 0;
        for (s, c) in &self.coeffs {
            let scaled = (c.num() as i128) << (e - c.log2_den());
            acc += if s.dot(x) { -scaled } else { scaled };
        }
        Dyadic::from_scaled(acc, e)
    }

    fn max_log2_den(&self) -> u32 {
        self.coeffs.values().map(Dyadic::log2_den).max().unwrap_or(0)
    }

    /// Exact sum of squared coefficients; equals one exactly for spectra of
    /// ±1-valued functions (Parseval).
    pub fn parseval_sum(&self) -> Dyadic {
        let e = self.max_log2_den();
        let mut acc: i128 = 0;
        for c in self.coeffs.values() {
            let scaled = (c.num() as i128) << (e - c.log2_den());
            acc += scaled * scaled;
        }
        Dyadic::from_scaled(acc, 2 * e)
    }

    /// Reconstructs the dense ±1 table; fails with `NotBoolean` when some
    /// point evaluates outside {+1,-1}. Limited to n <= 20.
    pub fn truth_table(&self) -> Result<TruthTable, FourierError> {
        if self.n > MAX_TABLE_VARS {
            return Err(FourierError::TooManyVariables(self.n));
        }
        let e = self.max_log2_den();
        let unit: i128 = 1 << e;
        let mut a: Vec<i128> = vec![0; 1 << self.n];
        for (s, c) in &self.coeffs {
            a[s.to_index() as usize] = (c.num() as i128) << (e - c.log2_den());
        }
        // Inverse transform is the same butterfly without normalization.
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
        let mut values = Vec::with_capacity(a.len());
        for v in a {
            if v == unit {
                values.push(1i8);
            } else if v == -unit {
                values.push(-1i8);
            } else {
                return Err(FourierError::NotBoolean);
            }
        }
        TruthTable::new(self.n, values)
    }

    /// True iff every evaluation lies in {+1,-1}; dense check, n <= 20.
    pub fn is_boolean(&self) -> bool {
        self.truth_table().is_ok()
    }

    /// Basis of the span of the support, accumulated in character order.
    pub fn fourier_span(&self) -> SpanBasis {
        let mut span = Span::new(self.n);
        for s in self.coeffs.keys() {
            span.insert(s);
        }
        SpanBasis {
            ambient: self.n,
            vectors: span.basis().to_vec(),
        }
    }

    pub fn fourier_dim(&self) -> usize {
        self.fourier_span().dim()
    }

    /// Relabels the Fourier domain by an invertible matrix: the output
    /// coefficient at Q is the input coefficient at B·Q. Sparsity and
    /// Boolean-ness are preserved exactly.
    pub fn basis_change(&self, b: &F2Matrix) -> Result<SparseSpectrum, FourierError> {
        if !b.is_square() || b.rows() != self.n {
            return Err(FourierError::DimensionMismatch(format!(
                "basis change needs {0}x{0}",
                self.n
            )));
        }
        let inv = b.inverse().map_err(|_| FourierError::SingularMatrix)?;
        let pairs = self
            .coeffs
            .iter()
            .map(|(s, &c)| (inv.mul_vec(s), c))
            .collect::<Vec<_>>();
        let out = SparseSpectrum::from_coeffs(self.n, pairs);
        debug_assert_eq!(out.sparsity(), self.sparsity());
        Ok(out)
    }

    /// Fixes variable `i` (1-based) to bit `b`, producing a spectrum on n-1
    /// variables. Never increases sparsity.
    pub fn restrict(&self, i: usize, b: bool) -> SparseSpectrum {
        assert!(i >= 1 && i <= self.n, "variable index out of range");
        let coord = i - 1;
        let pairs = self.coeffs.iter().map(|(s, &c)| {
            let t = s.without_coord(coord);
            let c = if s.get(coord) && b { -c } else { c };
            (t, c)
        });
        SparseSpectrum::from_coeffs(self.n - 1, pairs)
    }

    /// Plants this r-variable spectrum into n variables through the invertible
    /// matrix `b`: the output coefficient at B·(Q ‖ 0^(n-r)) equals the input
    /// coefficient at Q. Preserves sparsity, Boolean-ness, and granularity.
    pub fn lift(&self, b: &F2Matrix) -> Result<SparseSpectrum, FourierError> {
        let n = b.rows();
        if !b.is_square() || self.n > n {
            return Err(FourierError::DimensionMismatch(format!(
                "lift needs square matrix of size >= {}",
                self.n
            )));
        }
        if !b.is_invertible() {
            return Err(FourierError::SingularMatrix);
        }
        let pairs = self
            .coeffs
            .iter()
            .map(|(q, &c)| (b.mul_vec(&q.padded(n)), c))
            .collect::<Vec<_>>();
        let out = SparseSpectrum::from_coeffs(n, pairs);
        debug_assert_eq!(out.sparsity(), self.sparsity());
        Ok(out)
    }

    /// Grid exponent 1 - floor(log2(k)) with k = max(2, sparsity): every
    /// coefficient of a k-sparse ±1-valued function lies on this grid.
    pub fn granularity_exp(&self) -> i32 {
        1 - (self.k_effective() as u64).ilog2() as i32
    }

    /// True iff every coefficient is an integer multiple of the granularity
    /// grid step for this spectrum's (effective) sparsity.
    pub fn granularity_check(&self) -> bool {
        let exp = self.granularity_exp();
        self.coeffs.values().all(|c| c.is_multiple_of_pow2(exp))
    }

    pub fn to_json(&self) -> String {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, c)| CoeffJson {
                s: s.to_string(),
                num: c.num(),
                log2_den: c.log2_den(),
            })
            .collect();
        serde_json::to_string_pretty(&SpectrumJson {
            n: self.n,
            coeffs,
        })
        .expect("spectrum serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<SparseSpectrum, FourierError> {
        let parsed: SpectrumJson =
            serde_json::from_str(text).map_err(|e| FourierError::Parse(e.to_string()))?;
        let mut pairs = Vec::with_capacity(parsed.coeffs.len());
        for c in parsed.coeffs {
            let s: BitVec = c
                .s
                .parse()
                .map_err(|_| FourierError::Parse(format!("bad character {:?}", c.s)))?;
            if s.len() != parsed.n {
                return Err(FourierError::Parse(format!(
                    "character {} has length {} but n = {}",
                    c.s,
                    s.len(),
                    parsed.n
                )));
            }
            pairs.push((s, Dyadic::new(c.num, c.log2_den)));
        }
        Ok(SparseSpectrum::from_coeffs(parsed.n, pairs))
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    n: usize,
    coeffs: Vec<CoeffJson>,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    #[serde(rename = "S")]
    s: String,
    num: i64,
    log2_den: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn and2() -> SparseSpectrum {
        // f = -1 only at x = 11.
        TruthTable::from_fn(2, |x| if x == 3 { -1 } else { 1 })
            .unwrap()
            .wht()
    }

    fn coeff(s: &SparseSpectrum, bits: &str) -> Dyadic {
        s.coeff(&bits.parse().unwrap())
    }

    #[test]
    fn wht_of_constant_function() {
        let s = TruthTable::from_fn(2, |_| 1).unwrap().wht();
        assert_eq!(s.sparsity(), 1);
        assert_eq!(coeff(&s, "00"), Dyadic::ONE);
    }

    #[test]
    fn wht_of_character_is_a_point_mass() {
        let chi: BitVec = "10".parse().unwrap();
        let t = TruthTable::from_fn(2, |x| {
            if BitVec::from_index(x, 2).dot(&chi) {
                -1
            } else {
                1
            }
        })
        .unwrap();
        let s = t.wht();
        assert_eq!(s.sparsity(), 1);
        assert_eq!(coeff(&s, "10"), Dyadic::ONE);
    }

    #[test]
    fn wht_of_and2() {
        let s = and2();
        assert_eq!(coeff(&s, "00"), Dyadic::new(1, 1));
        assert_eq!(coeff(&s, "01"), Dyadic::new(1, 1));
        assert_eq!(coeff(&s, "10"), Dyadic::new(1, 1));
        assert_eq!(coeff(&s, "11"), Dyadic::new(-1, 1));
    }

    #[test]
    fn evaluate_matches_definition() {
        let s = and2();
        assert_eq!(s.evaluate(&"11".parse().unwrap()), Dyadic::from_int(-1));
        assert_eq!(s.evaluate(&"01".parse().unwrap()), Dyadic::ONE);
        let chi = SparseSpectrum::from_coeffs(
            2,
            [("10".parse().unwrap(), Dyadic::ONE)],
        );
        assert_eq!(chi.evaluate(&"10".parse().unwrap()), Dyadic::from_int(-1));
        let constant = SparseSpectrum::from_coeffs(
            2,
            [("00".parse().unwrap(), Dyadic::ONE)],
        );
        assert_eq!(constant.evaluate(&"11".parse().unwrap()), Dyadic::ONE);
    }

    #[test]
    fn boolean_detection() {
        assert!(and2().is_boolean());
        let half = SparseSpectrum::from_coeffs(
            2,
            [("00".parse().unwrap(), Dyadic::new(1, 1))],
        );
        assert!(!half.is_boolean());
        let chi = SparseSpectrum::from_coeffs(
            2,
            [("10".parse().unwrap(), Dyadic::ONE)],
        );
        assert!(chi.is_boolean());
    }

    #[test]
    fn span_dimensions() {
        assert_eq!(and2().fourier_dim(), 2);
        let constant = SparseSpectrum::from_coeffs(
            2,
            [("00".parse().unwrap(), Dyadic::ONE)],
        );
        assert_eq!(constant.fourier_dim(), 0);
        let chi = SparseSpectrum::from_coeffs(
            2,
            [("10".parse().unwrap(), Dyadic::ONE)],
        );
        assert_eq!(chi.fourier_dim(), 1);
    }

    #[test]
    fn basis_change_identity_and_swap() {
        let s = and2();
        let id = F2Matrix::identity(2);
        assert_eq!(s.basis_change(&id).unwrap(), s);

        let swap = F2Matrix::from_rows(vec!["01".parse().unwrap(), "10".parse().unwrap()])
            .unwrap();
        let chi01 = SparseSpectrum::from_coeffs(
            2,
            [("01".parse().unwrap(), Dyadic::ONE)],
        );
        let swapped = chi01.basis_change(&swap).unwrap();
        assert_eq!(coeff(&swapped, "10"), Dyadic::ONE);

        // AND is symmetric under the swap: coefficients at 01/10 exchange.
        let sw = s.basis_change(&swap).unwrap();
        assert_eq!(coeff(&sw, "01"), coeff(&s, "10"));
        assert_eq!(coeff(&sw, "10"), coeff(&s, "01"));
        assert_eq!(coeff(&sw, "00"), coeff(&s, "00"));
        assert_eq!(coeff(&sw, "11"), coeff(&s, "11"));
    }

    #[test]
    fn basis_change_rejects_singular() {
        let sing =
            F2Matrix::from_rows(vec!["11".parse().unwrap(), "11".parse().unwrap()]).unwrap();
        assert_eq!(
            and2().basis_change(&sing),
            Err(FourierError::SingularMatrix)
        );
    }

    #[test]
    fn restriction_of_and2() {
        // Fixing x1 = 1 leaves the character on the surviving variable.
        let s1 = and2().restrict(1, true);
        assert_eq!(s1.sparsity(), 1);
        assert_eq!(coeff(&s1, "1"), Dyadic::ONE);
        // Fixing x1 = 0 leaves the constant +1.
        let s0 = and2().restrict(1, false);
        assert_eq!(s0.sparsity(), 1);
        assert_eq!(coeff(&s0, "0"), Dyadic::ONE);
        // Restricting a constant keeps it constant.
        let c = SparseSpectrum::from_coeffs(2, [("00".parse().unwrap(), Dyadic::ONE)]);
        let cr = c.restrict(1, false);
        assert_eq!(coeff(&cr, "0"), Dyadic::ONE);
    }

    #[test]
    fn lift_examples() {
        let chi1 = SparseSpectrum::from_coeffs(1, [("1".parse().unwrap(), Dyadic::ONE)]);
        let lifted = chi1.lift(&F2Matrix::identity(2)).unwrap();
        assert_eq!(coeff(&lifted, "10"), Dyadic::ONE);

        // Planting through a matrix whose first column is 110 moves the
        // character there.
        let b = F2Matrix::from_cols(&[
            "110".parse().unwrap(),
            "010".parse().unwrap(),
            "001".parse().unwrap(),
        ])
        .unwrap();
        assert!(b.is_invertible());
        let planted = chi1.lift(&b).unwrap();
        assert_eq!(coeff(&planted, "110"), Dyadic::ONE);

        // AND2 lifted through the identity into 3 variables is AND of the
        // first two of three variables.
        let and3 = and2().lift(&F2Matrix::identity(3)).unwrap();
        let t = and3.truth_table().unwrap();
        for x in 0..8u64 {
            let expect = if x >> 1 == 3 { -1 } else { 1 };
            assert_eq!(t.value(x), expect, "x={x}");
        }
    }

    #[test]
    fn granularity_examples() {
        assert!(and2().granularity_check()); // k=4, grid 1/2
        let chi = SparseSpectrum::from_coeffs(2, [("10".parse().unwrap(), Dyadic::ONE)]);
        assert!(chi.granularity_check()); // k clamped to 2, grid 1
        let bad = SparseSpectrum::from_coeffs(
            2,
            [
                ("00".parse().unwrap(), Dyadic::new(3, 2)),
                ("10".parse().unwrap(), Dyadic::new(1, 2)),
            ],
        );
        assert!(!bad.granularity_check()); // 3/4 not an integer on grid 1
    }

    #[test]
    fn parseval_for_boolean_spectra() {
        assert!(and2().parseval_sum().is_one());
    }

    #[test]
    fn json_roundtrip() {
        let s = and2();
        let text = s.to_json();
        assert_eq!(SparseSpectrum::from_json(&text).unwrap(), s);
    }
}
