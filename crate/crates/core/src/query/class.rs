use serde::{Deserialize, Serialize};

use crate::f2linalg::{enumerate_subspaces, BitVec, Span};

use super::QueryError;

const MU_SUM_TOLERANCE: f64 = 1e-12;

/// A finite concept class: distinct N-bit strings with a probability
/// distribution over them. Concepts store the ±1-valued function with the
/// fixed bit map -1 -> 1, +1 -> 0, so "the function is -1 at x" reads as
/// "bit x of the concept is set".
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptClass {
    n_bits: usize,
    concepts: Vec<BitVec>,
    mu: Vec<f64>,
}

impl ConceptClass {
    pub fn new(concepts: Vec<BitVec>, mu: Vec<f64>) -> Result<Self, QueryError> {
        if concepts.is_empty() {
            return Err(QueryError::InvalidClass("no concepts".into()));
        }
        let n_bits = concepts[0].len();
        if n_bits == 0 {
            return Err(QueryError::InvalidClass("zero-length concepts".into()));
        }
        if concepts.iter().any(|c| c.len() != n_bits) {
            return Err(QueryError::InvalidClass("jagged concept lengths".into()));
        }
        let mut sorted = concepts.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(QueryError::InvalidClass("duplicate concepts".into()));
        }
        if mu.len() != concepts.len() {
            return Err(QueryError::InvalidClass(format!(
                "{} concepts but {} probabilities",
                concepts.len(),
                mu.len()
            )));
        }
        if mu.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(QueryError::InvalidClass("negative or non-finite mass".into()));
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > MU_SUM_TOLERANCE {
            return Err(QueryError::InvalidClass(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self {
            n_bits,
            concepts,
            mu,
        })
    }

    pub fn uniform(concepts: Vec<BitVec>) -> Result<Self, QueryError> {
        let p = 1.0 / concepts.len() as f64;
        let mu = vec![p; concepts.len()];
        Self::new(concepts, mu)
    }

    /// The N point functions on a domain of size N: concept i is -1 exactly
    /// at point i, so its bit string has weight one.
    pub fn point(n_points: usize) -> Self {
        let concepts = (0..n_points).map(|i| BitVec::basis(n_points, i)).collect();
        Self::uniform(concepts).expect("point class is valid")
    }

    /// All 2^n parity functions on {0,1}^n as truth-table strings of length
    /// 2^n: bit at position x is the parity S·x.
    pub fn linear(n: usize) -> Self {
        assert!(n <= 16, "linear class limited to 16 variables");
        let len = 1usize << n;
        let concepts = (0..len as u64)
            .map(|s| {
                let sv = BitVec::from_index(s, n);
                let mut c = BitVec::zeros(len);
                for x in 0..len as u64 {
                    if BitVec::from_index(x, n).dot(&sv) {
                        c.set(x as usize, true);
                    }
                }
                c
            })
            .collect();
        Self::uniform(concepts).expect("linear class is valid")
    }

    /// Indicator concepts of all (n - log2 k)-dimensional subspaces of
    /// {0,1}^n: the concept for subspace V is -1 exactly on V. Requires k a
    /// power of two with log2(k) <= n.
    pub fn subspace(n: usize, k: usize) -> Result<Self, QueryError> {
        if !k.is_power_of_two() || (k.ilog2() as usize) > n {
            return Err(QueryError::InvalidClass(format!(
                "subspace class needs a power-of-two k with log2(k) <= n, got k={k}, n={n}"
            )));
        }
        let d = n - k.ilog2() as usize;
        let bases = enumerate_subspaces(n, d).map_err(|e| QueryError::TooLarge(e.to_string()))?;
        let len = 1usize << n;
        let concepts = bases
            .into_iter()
            .map(|basis| {
                let mut span = Span::new(n);
                for row in 0..basis.rows() {
                    span.insert(basis.row(row));
                }
                let mut c = BitVec::zeros(len);
                for x in 0..len as u64 {
                    if span.contains(&BitVec::from_index(x, n)) {
                        c.set(x as usize, true);
                    }
                }
                c
            })
            .collect();
        Self::uniform(concepts)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[BitVec] {
        &self.concepts
    }

    pub fn concept(&self, idx: usize) -> &BitVec {
        &self.concepts[idx]
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn max_mass(&self) -> f64 {
        self.mu.iter().cloned().fold(0.0, f64::max)
    }

    /// Mass of concepts whose bit `index` (1-based) is set, and mass of those
    /// where it is clear.
    pub fn mass_split(&self, index: usize) -> Result<(f64, f64), QueryError> {
        if index == 0 || index > self.n_bits {
            return Err(QueryError::IndexOutOfRange {
                index,
                len: self.n_bits,
            });
        }
        let mut one = 0.0;
        for (c, &p) in self.concepts.iter().zip(&self.mu) {
            if c.get(index - 1) {
                one += p;
            }
        }
        let zero = (1.0 - one).max(0.0);
        Ok((zero, one))
    }

    pub fn to_json(&self) -> String {
        let doc = ClassJson {
            n: self.n_bits,
            concepts: self.concepts.iter().map(BitVec::to_string).collect(),
            mu: self.mu.iter().map(|&p| MuEntry::Float(p)).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("class serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, QueryError> {
        let doc: ClassJson =
            serde_json::from_str(text).map_err(|e| QueryError::Parse(e.to_string()))?;
        let concepts = doc
            .concepts
            .iter()
            .map(|s| s.parse::<BitVec>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| QueryError::Parse(e.to_string()))?;
        if concepts.iter().any(|c| c.len() != doc.n) {
            return Err(QueryError::Parse("concept length differs from N".into()));
        }
        let mu = doc
            .mu
            .iter()
            .map(MuEntry::value)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(concepts, mu)
    }
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    #[serde(rename = "N")]
    n: usize,
    concepts: Vec<String>,
    mu: Vec<MuEntry>,
}

/// Probabilities in class files may be plain numbers or exact "p/q" strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MuEntry {
    Float(f64),
    Rational(String),
}

impl MuEntry {
    fn value(&self) -> Result<f64, QueryError> {
        match self {
            MuEntry::Float(v) => Ok(*v),
            MuEntry::Rational(s) => {
                let (p, q) = s
                    .split_once('/')
                    .ok_or_else(|| QueryError::Parse(format!("bad rational {s:?}")))?;
                let p: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| QueryError::Parse(format!("bad rational {s:?}")))?;
                let q: f64 = q
                    .trim()
                    .parse()
                    .map_err(|_| QueryError::Parse(format!("bad rational {s:?}")))?;
                if q == 0.0 {
                    return Err(QueryError::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(p / q)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_class_has_weight_one_strings() {
        let cc = ConceptClass::point(4);
        assert_eq!(cc.len(), 4);
        assert!(cc.concepts().iter().all(|c| c.count_ones() == 1));
    }

    #[test]
    fn linear_class_n2_matches_parity_tables() {
        let cc = ConceptClass::linear(2);
        let strings: Vec<String> = cc.concepts().iter().map(BitVec::to_string).collect();
        assert_eq!(strings, vec!["0000", "0101", "0011", "0110"]);
    }

    #[test]
    fn subspace_class_counts_and_weights() {
        let cc = ConceptClass::subspace(3, 2).unwrap();
        assert_eq!(cc.len(), 7);
        assert!(cc.concepts().iter().all(|c| c.count_ones() == 4));
    }

    #[test]
    fn duplicate_concepts_are_rejected() {
        let concepts: Vec<BitVec> = vec!["01".parse().unwrap(), "01".parse().unwrap()];
        assert!(ConceptClass::uniform(concepts).is_err());
    }

    #[test]
    fn mass_split_counts_set_bits() {
        let cc = ConceptClass::point(4);
        let (zero, one) = cc.mass_split(1).unwrap();
        assert!((one - 0.25).abs() < 1e-15);
        assert!((zero - 0.75).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip_with_rational_masses() {
        let text = r#"{"N": 2, "concepts": ["01", "10"], "mu": ["1/3", 0.6666666666666667]}"#;
        let cc = ConceptClass::from_json(text).unwrap();
        assert_eq!(cc.len(), 2);
        let again = ConceptClass::from_json(&cc.to_json()).unwrap();
        assert_eq!(cc, again);
    }
}
