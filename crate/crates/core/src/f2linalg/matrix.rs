use std::fmt;

use rand::Rng;

use super::{BitVec, F2Error};

/// A matrix over GF(2), stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Result<Self, F2Error> {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(F2Error::DimensionMismatch("jagged rows".into()));
        }
        Ok(Self {
            rows: nrows,
            cols,
            data: rows,
        })
    }

    /// Builds a matrix whose columns are the given vectors, in order.
    pub fn from_cols(cols: &[BitVec]) -> Result<Self, F2Error> {
        let rows = cols.first().map_or(0, BitVec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(F2Error::DimensionMismatch("jagged columns".into()));
        }
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn col(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix-vector product `M·v` (v as a column vector).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    /// Computes `Mᵀ·v` without materializing the transpose: the result is the
    /// XOR of the rows of `M` selected by the set coordinates of `v`.
    pub fn transpose_mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = BitVec::zeros(self.cols);
        for i in v.ones() {
            out.xor_with(&self.data[i]);
        }
        out
    }

    pub fn mul(&self, rhs: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != rhs.rows {
            return Err(F2Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = F2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in self.data[r].ones() {
                out.data[r].xor_with(&rhs.data[k]);
            }
        }
        Ok(out)
    }

    /// GF(2) rank via Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_with(&pivot_row);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse over GF(2) via Gauss-Jordan on the augmented system.
    pub fn inverse(&self) -> Result<F2Matrix, F2Error> {
        if !self.is_square() {
            return Err(F2Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut work = self.data.clone();
        let mut inv = F2Matrix::identity(n).data;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| work[r].get(col)) else {
                return Err(F2Error::SingularMatrix);
            };
            work.swap(col, pivot);
            inv.swap(col, pivot);
            let (wp, ip) = (work[col].clone(), inv[col].clone());
            for r in 0..n {
                if r != col && work[r].get(col) {
                    work[r].xor_with(&wp);
                    inv[r].xor_with(&ip);
                }
            }
        }
        F2Matrix::from_rows(inv)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows).map(|_| BitVec::random(cols, rng)).collect();
        Self { rows, cols, data }
    }

    /// Rejection-samples an invertible n x n matrix; the success probability
    /// per draw is at least 0.28, so this terminates quickly.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(n, n, rng);
            if m.is_invertible() {
                return m;
            }
        }
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> F2Matrix {
        F2Matrix::from_rows(rows.iter().map(|r| r.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn rank_identity() {
        assert_eq!(F2Matrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_duplicated_rows() {
        assert_eq!(m(&["11", "11"]).rank(), 1);
    }

    #[test]
    fn rank_cyclic_rows_sum_to_zero() {
        // Rows sum to zero mod 2, so the rank drops to 2.
        assert_eq!(m(&["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn inverse_identity() {
        let id = F2Matrix::identity(4);
        assert_eq!(id.inverse().unwrap(), id);
    }

    #[test]
    fn inverse_self_inverse_example() {
        let a = m(&["11", "01"]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, a);
        assert_eq!(a.mul(&inv).unwrap(), F2Matrix::identity(2));
    }

    #[test]
    fn inverse_singular_fails() {
        assert_eq!(m(&["11", "11"]).inverse(), Err(F2Error::SingularMatrix));
    }

    #[test]
    fn transpose_mul_vec_matches_explicit_transpose() {
        let a = m(&["110", "011", "111"]);
        let v: BitVec = "101".parse().unwrap();
        assert_eq!(a.transpose_mul_vec(&v), a.transpose().mul_vec(&v));
    }
}
