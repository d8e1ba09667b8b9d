use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{F2Error, F2Matrix};

/// Ambient-dimension guard for subspace enumeration; the number of subspaces
/// grows like 2^(d(n-d)) and becomes infeasible quickly.
pub const SUBSPACE_ENUM_MAX_DIM: usize = 14;

const ENUM_COUNT_CAP: u64 = 1 << 20;

/// Exact number of d-dimensional subspaces of GF(2)^n, the Gaussian binomial
/// coefficient: the product of (2^(n-i) - 1) / (2^(d-i) - 1) over i < d.
pub fn subspace_count(n: usize, d: usize) -> BigUint {
    assert!(d <= n, "subspace dimension exceeds ambient dimension");
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= (BigUint::one() << (n - i)) - BigUint::one();
        den *= (BigUint::one() << (d - i)) - BigUint::one();
    }
    debug_assert!((&num % &den).is_zero(), "Gaussian binomial divides exactly");
    num / den
}

/// Enumerates every d-dimensional subspace of GF(2)^n exactly once, returning
/// one canonical basis per subspace: the reduced row-echelon form with rows
/// sorted by pivot column.
pub fn enumerate_subspaces(n: usize, d: usize) -> Result<Vec<F2Matrix>, F2Error> {
    if d > n {
        return Err(F2Error::DimensionMismatch(format!("d={d} > n={n}")));
    }
    if n > SUBSPACE_ENUM_MAX_DIM {
        return Err(F2Error::TooLarge(format!(
            "n={n} exceeds enumeration limit {SUBSPACE_ENUM_MAX_DIM}"
        )));
    }
    let count = subspace_count(n, d);
    if count > BigUint::from(ENUM_COUNT_CAP) {
        return Err(F2Error::TooLarge(format!(
            "{count} subspaces exceed the cap {ENUM_COUNT_CAP}"
        )));
    }

    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        emit_rref_for_pivots(n, d, &pivots, &mut out);
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    debug_assert_eq!(BigUint::from(out.len() as u64), count);
    Ok(out)
}

/// All RREF matrices with the given pivot columns: entries right of each
/// pivot in non-pivot columns are free, everything else is forced.
fn emit_rref_for_pivots(n: usize, d: usize, pivots: &[usize], out: &mut Vec<F2Matrix>) {
    if d == 0 {
        out.push(F2Matrix::zeros(0, n));
        return;
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &p in pivots {
            v[p] = true;
        }
        v
    };
    // Free positions in a fixed (row-major) order so enumeration is
    // deterministic.
    let mut free: Vec<(usize, usize)> = Vec::new();
    for (row, &p) in pivots.iter().enumerate() {
        for (col, &piv) in is_pivot.iter().enumerate().skip(p + 1) {
            if !piv {
                free.push((row, col));
            }
        }
    }
    for mask in 0u64..(1u64 << free.len()) {
        let mut m = F2Matrix::zeros(d, n);
        for (row, &p) in pivots.iter().enumerate() {
            m.set(row, p, true);
        }
        for (bit, &(row, col)) in free.iter().enumerate() {
            if (mask >> bit) & 1 == 1 {
                m.set(row, col, true);
            }
        }
        out.push(m);
    }
}

/// Advances `combo` to the next d-combination of {0..n-1} in lexicographic
/// order; returns false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let d = combo.len();
    if d == 0 {
        return false;
    }
    let mut i = d;
    while i > 0 {
        i -= 1;
        if combo[i] < n - d + i {
            combo[i] += 1;
            for j in i + 1..d {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
