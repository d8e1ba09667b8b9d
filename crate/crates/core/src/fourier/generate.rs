use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2linalg::F2Matrix;

use super::{FourierError, SparseSpectrum, TruthTable};

/// Largest core dimension for which the generator enumerates truth tables
/// (2^(2^4) = 65536 candidates).
pub const MAX_GENERATOR_CORE: usize = 4;

/// Samples a Boolean function on n variables with Fourier sparsity <= k and
/// Fourier dimension exactly `r_core`, by drawing an r_core-variable truth
/// table of full Fourier dimension and sparsity <= k and planting it through
/// a random invertible basis. Deterministic given the seed.
pub fn random_sparse_function(
    n: usize,
    k: usize,
    r_core: usize,
    seed: u64,
) -> Result<SparseSpectrum, FourierError> {
    if k < 2 {
        return Err(FourierError::InvalidParameter(format!(
            "sparsity bound k = {k} must be at least 2"
        )));
    }
    if r_core > n.min(MAX_GENERATOR_CORE) {
        return Err(FourierError::InvalidParameter(format!(
            "r_core = {r_core} exceeds min(n, {MAX_GENERATOR_CORE})"
        )));
    }
    let candidates = candidate_table_ids(r_core, k);
    if candidates.is_empty() {
        return Err(FourierError::Unsatisfiable { k, r_core });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = candidates[rng.random_range(0..candidates.len())];
    let core = TruthTable::from_id(r_core, id)?.wht();
    let b = F2Matrix::random_invertible(n, &mut rng);
    core.lift(&b)?.with_declared_sparsity(k)
}

/// Table ids of all r-variable functions with sparsity <= k and full Fourier
/// dimension r, via a compact transform pass per candidate.
fn candidate_table_ids(r: usize, k: usize) -> Vec<u64> {
    let points = 1usize << r;
    let mut out = Vec::new();
    let mut a = vec![0i32; points];
    for id in 0u64..(1u64 << points) {
        for (x, slot) in a.iter_mut().enumerate() {
            *slot = if (id >> x) & 1 == 1 { -1 } else { 1 };
        }
        let mut h = 1;
        while h < points {
            let mut start = 0;
            while start < points {
                for j in start..start + h {
                    let (x, y) = (a[j], a[j + h]);
                    a[j] = x + y;
                    a[j + h] = x - y;
                }
                start += 2 * h;
            }
            h *= 2;
        }
        let mut sparsity = 0usize;
        let mut rank_rows: Vec<u8> = Vec::with_capacity(r);
        for (s, &c) in a.iter().enumerate() {
            if c != 0 {
                sparsity += 1;
                let mut v = s as u8;
                for &row in &rank_rows {
                    let lead = 7 - row.leading_zeros() as u8;
                    if (v >> lead) & 1 == 1 {
                        v ^= row;
                    }
                }
                if v != 0 {
                    rank_rows.push(v);
                }
            }
        }
        if sparsity <= k && rank_rows.len() == r {
            out.push(id);
        }
    }
    out
}

/// AND on t variables in the ±1 convention: -1 exactly at the all-ones input.
pub fn and_table(t: usize) -> TruthTable {
    TruthTable::from_fn(t, |x| if x == (1 << t) - 1 { -1 } else { 1 })
        .expect("AND table construction")
}

/// The addressing function on log2(m) + m variables: the first log2(m) bits
/// select one of the last m bits, and the output is -1 iff the selected bit
/// is 1. `m` must be a power of two.
pub fn addressing_table(m: usize) -> Result<TruthTable, FourierError> {
    if !m.is_power_of_two() {
        return Err(FourierError::InvalidParameter(format!(
            "addressing function needs a power-of-two arity, got {m}"
        )));
    }
    let log_m = m.trailing_zeros() as usize;
    let n = log_m + m;
    TruthTable::from_fn(n, |input| {
        let address = (input >> m) as usize;
        let selected = (input >> (m - 1 - address)) & 1;
        if selected == 1 {
            -1
        } else {
            1
        }
    })
}
