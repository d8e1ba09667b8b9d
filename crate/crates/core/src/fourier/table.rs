use crate::f2linalg::BitVec;

use super::{Dyadic, FourierError, SparseSpectrum};

/// Largest number of variables for which dense truth tables are handled.
pub const MAX_TABLE_VARS: usize = 20;

/// Dense evaluation table of a function f: {0,1}^n -> {+1,-1}, indexed by the
/// integer form of the input (coordinate 0 most significant).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    n: usize,
    values: Vec<i8>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<i8>) -> Result<Self, FourierError> {
        if n > MAX_TABLE_VARS {
            return Err(FourierError::TooManyVariables(n));
        }
        if values.len() != 1 << n {
            return Err(FourierError::BadTableLength {
                n,
                len: values.len(),
            });
        }
        if values.iter().any(|&v| v != 1 && v != -1) {
            return Err(FourierError::NotPlusMinusOne);
        }
        Ok(Self { n, values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> i8) -> Result<Self, FourierError> {
        Self::new(n, (0..1u64 << n).map(&mut f).collect())
    }

    /// Decodes a table id: bit x of `id` set means f(x) = -1.
    pub fn from_id(n: usize, id: u64) -> Result<Self, FourierError> {
        assert!(n <= 6, "table ids only cover up to 6 variables");
        Self::from_fn(n, |x| if (id >> x) & 1 == 1 { -1 } else { 1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, x: u64) -> i8 {
        self.values[x as usize]
    }

    pub fn value_at(&self, x: &BitVec) -> i8 {
        assert_eq!(x.len(), self.n, "input length mismatch");
        self.value(x.to_index())
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    /// Walsh-Hadamard transform to an exact sparse spectrum: coefficients are
    /// dyadic rationals with denominator 2^n; zero coefficients are dropped.
    pub fn wht(&self) -> SparseSpectrum {
        let mut a: Vec<i64> = self.values.iter().map(|&v| v as i64).collect();
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
        let coeffs = a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(s, &c)| {
            (
                BitVec::from_index(s as u64, self.n),
                Dyadic::new(c, self.n as u32),
            )
        });
        SparseSpectrum::from_coeffs(self.n, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_entries_and_lengths() {
        assert!(TruthTable::new(1, vec![1, 0]).is_err());
        assert!(TruthTable::new(1, vec![1, -1, 1]).is_err());
        assert!(TruthTable::new(1, vec![1, -1]).is_ok());
    }

    #[test]
    fn zero_variable_table_is_a_constant() {
        let t = TruthTable::new(0, vec![-1]).unwrap();
        let s = t.wht();
        assert_eq!(s.sparsity(), 1);
        assert_eq!(s.coeff(&BitVec::zeros(0)), Dyadic::from_int(-1));
    }

    #[test]
    fn table_id_encodes_minus_one_positions() {
        // id 8 = bit 3 set: f(11) = -1, everything else +1.
        let t = TruthTable::from_id(2, 8).unwrap();
        assert_eq!(t.value(3), -1);
        assert_eq!(t.value(0), 1);
    }
}
