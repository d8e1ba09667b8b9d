use super::{BitVec, F2Error, F2Matrix};

/// Incremental GF(2) span: supports membership tests and insertion in
/// amortized O(dim) row operations per call.
///
/// Keeps both the echelonized rows (for reduction) and the vectors as they
/// were inserted (so callers can reconstruct the accumulation order).
#[derive(Clone, Debug)]
pub struct Span {
    ambient: usize,
    echelon: Vec<BitVec>, // sorted by leading coordinate
    inserted: Vec<BitVec>,
}

impl Span {
    pub fn new(ambient: usize) -> Self {
        Self {
            ambient,
            echelon: Vec::new(),
            inserted: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.len()
    }

    /// The independent vectors in insertion order.
    pub fn basis(&self) -> &[BitVec] {
        &self.inserted
    }

    fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for row in &self.echelon {
            let lead = row.first_one().expect("echelon rows are nonzero");
            if v.get(lead) {
                v.xor_with(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        self.reduce(v).is_zero()
    }

    /// Inserts `v` if it is independent of the current span. Returns true iff
    /// the dimension grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let reduced = self.reduce(v);
        if reduced.is_zero() {
            return false;
        }
        let lead = reduced.first_one().unwrap();
        let pos = self
            .echelon
            .partition_point(|r| r.first_one().unwrap() < lead);
        self.echelon.insert(pos, reduced);
        self.inserted.push(v.clone());
        true
    }
}

/// True iff `v` lies in the GF(2) span of `basis`.
pub fn span_contains(basis: &[BitVec], v: &BitVec) -> bool {
    let mut span = Span::new(v.len());
    for b in basis {
        span.insert(b);
    }
    span.contains(v)
}

/// Completes the given independent vectors to a basis of GF(2)^n, returning
/// the invertible n x n matrix whose first columns are the inputs in order.
///
/// Completion is deterministic: standard basis vectors e_1, e_2, ... are
/// scanned in index order and appended whenever they grow the rank.
pub fn complete_basis(vectors: &[BitVec], n: usize) -> Result<F2Matrix, F2Error> {
    let mut span = Span::new(n);
    let mut cols: Vec<BitVec> = Vec::with_capacity(n);
    for v in vectors {
        if v.len() != n {
            return Err(F2Error::DimensionMismatch(format!(
                "vector length {} != ambient {}",
                v.len(),
                n
            )));
        }
        if !span.insert(v) {
            return Err(F2Error::DependentInput);
        }
        cols.push(v.clone());
    }
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let e = BitVec::basis(n, i);
        if span.insert(&e) {
            cols.push(e);
        }
    }
    F2Matrix::from_cols(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_span_contains_only_zero() {
        let zero = BitVec::zeros(3);
        assert!(span_contains(&[], &zero));
        assert!(!span_contains(&[], &"100".parse().unwrap()));
    }

    #[test]
    fn two_basis_vectors_span_their_sum() {
        let basis: Vec<BitVec> = vec!["10".parse().unwrap(), "01".parse().unwrap()];
        assert!(span_contains(&basis, &"11".parse().unwrap()));
    }

    #[test]
    fn vector_outside_singleton_span() {
        // span("110") = {000, 110}
        let basis: Vec<BitVec> = vec!["110".parse().unwrap()];
        assert!(!span_contains(&basis, &"011".parse().unwrap()));
    }

    #[test]
    fn complete_single_basis_vector() {
        let b = complete_basis(&["10".parse().unwrap()], 2).unwrap();
        assert_eq!(b, F2Matrix::identity(2));
    }

    #[test]
    fn completion_keeps_input_columns_and_is_invertible() {
        let vecs: Vec<BitVec> = vec!["110".parse().unwrap(), "011".parse().unwrap()];
        let b = complete_basis(&vecs, 3).unwrap();
        assert_eq!(b.rank(), 3);
        assert_eq!(b.col(0), vecs[0]);
        assert_eq!(b.col(1), vecs[1]);
    }

    #[test]
    fn dependent_input_is_rejected() {
        let vecs: Vec<BitVec> = vec!["110".parse().unwrap(), "110".parse().unwrap()];
        assert_eq!(complete_basis(&vecs, 3), Err(F2Error::DependentInput));
    }

    #[test]
    fn empty_input_completes_to_identity() {
        assert_eq!(complete_basis(&[], 4).unwrap(), F2Matrix::identity(4));
    }
}
