use super::{ConceptClass, QueryError};

const DEFAULT_NORM_TOL: f64 = 1e-10;
const POWER_ITERATION_CAP: usize = 100_000;

/// Symmetric nonnegative matrix with zero diagonal, indexed by concept pairs.
///
/// The canonical construction from a class is vv* - diag(mu) with
/// v_c = sqrt(mu(c)): off-diagonal entries sqrt(mu(c)·mu(c')), zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryMatrix {
    dim: usize,
    data: Vec<f64>,
    canonical: bool,
}

impl AdversaryMatrix {
    /// Builds the canonical matrix for a class.
    pub fn from_class(cc: &ConceptClass) -> Self {
        let dim = cc.len();
        let root: Vec<f64> = cc.mu().iter().map(|&p| p.sqrt()).collect();
        let mut data = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    data[r * dim + c] = root[r] * root[c];
                }
            }
        }
        Self {
            dim,
            data,
            canonical: true,
        }
    }

    /// Wraps explicit entries; they must be symmetric, nonnegative, and zero
    /// on the diagonal.
    pub fn from_entries(dim: usize, data: Vec<f64>) -> Result<Self, QueryError> {
        if data.len() != dim * dim {
            return Err(QueryError::InvalidClass("matrix size mismatch".into()));
        }
        for r in 0..dim {
            if data[r * dim + r] != 0.0 {
                return Err(QueryError::InvalidClass("nonzero diagonal".into()));
            }
            for c in 0..dim {
                let v = data[r * dim + c];
                if v < 0.0 || !v.is_finite() {
                    return Err(QueryError::InvalidClass("negative entry".into()));
                }
                if (v - data[c * dim + r]).abs() != 0.0 {
                    return Err(QueryError::InvalidClass("asymmetric entries".into()));
                }
            }
        }
        Ok(Self {
            dim,
            data,
            canonical: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.dim + c]
    }

    /// Entrywise product with the disagreement mask of coordinate `index`
    /// (1-based): entries survive only where the two concepts differ there.
    pub fn masked(&self, cc: &ConceptClass, index: usize) -> Result<AdversaryMatrix, QueryError> {
        if cc.len() != self.dim {
            return Err(QueryError::InvalidClass("class size mismatch".into()));
        }
        if index == 0 || index > cc.n_bits() {
            return Err(QueryError::IndexOutOfRange {
                index,
                len: cc.n_bits(),
            });
        }
        let bits: Vec<bool> = cc.concepts().iter().map(|c| c.get(index - 1)).collect();
        let mut data = self.data.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                if bits[r] == bits[c] {
                    data[r * self.dim + c] = 0.0;
                }
            }
        }
        Ok(AdversaryMatrix {
            dim: self.dim,
            data,
            canonical: false,
        })
    }

    /// Norm of the masked matrix. For the canonical construction this is
    /// known in closed form: sqrt(mu(C_i=0)·mu(C_i=1)); otherwise the masked
    /// matrix is measured numerically.
    pub fn masked_norm(&self, cc: &ConceptClass, index: usize) -> Result<f64, QueryError> {
        if self.canonical {
            if index == 0 || index > cc.n_bits() {
                return Err(QueryError::IndexOutOfRange {
                    index,
                    len: cc.n_bits(),
                });
            }
            let (zero, one) = cc.mass_split(index)?;
            Ok((zero * one).sqrt())
        } else {
            self.masked(cc, index)?.operator_norm(DEFAULT_NORM_TOL)
        }
    }

    /// Largest singular value. Symmetric matrices only: closed forms up to
    /// 3x3, then power iteration on the squared matrix with Rayleigh-quotient
    /// stopping at `tol` and an iteration cap.
    pub fn operator_norm(&self, tol: f64) -> Result<f64, QueryError> {
        match self.dim {
            0 => Ok(0.0),
            1 => Ok(self.data[0].abs()),
            2 => Ok(norm_2x2(&self.data)),
            3 => Ok(norm_3x3(&self.data)),
            _ => self.power_iteration(tol),
        }
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (r, slot) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            *slot = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    fn power_iteration(&self, tol: f64) -> Result<f64, QueryError> {
        if self.data.iter().all(|&v| v == 0.0) {
            return Ok(0.0);
        }
        // Deterministic start with irrational stride so it is practically
        // never orthogonal to the top eigenspace.
        let mut x: Vec<f64> = (0..self.dim)
            .map(|i| 1.0 + ((i as f64) * 0.754_877_666_246_693).fract())
            .collect();
        normalize(&mut x);
        let mut ax = vec![0.0; self.dim];
        let mut prev = -1.0;
        for _ in 0..POWER_ITERATION_CAP {
            self.apply(&x, &mut ax);
            let sigma = dot(&ax, &ax).sqrt();
            if sigma == 0.0 {
                // x landed in the kernel; restart from a basis vector of the
                // heaviest row.
                let r = (0..self.dim)
                    .max_by(|&a, &b| {
                        row_norm(self, a)
                            .partial_cmp(&row_norm(self, b))
                            .unwrap()
                    })
                    .unwrap();
                x.iter_mut().for_each(|v| *v = 0.0);
                x[r] = 1.0;
                prev = -1.0;
                continue;
            }
            if (sigma - prev).abs() <= tol / 2.0 {
                return Ok(sigma);
            }
            prev = sigma;
            // One more application completes the squared-matrix step.
            self.apply(&ax, &mut x);
            normalize(&mut x);
        }
        Err(QueryError::NonConvergence {
            iterations: POWER_ITERATION_CAP,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

fn row_norm(m: &AdversaryMatrix, r: usize) -> f64 {
    m.data[r * m.dim..(r + 1) * m.dim]
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
}

fn norm_2x2(d: &[f64]) -> f64 {
    // Symmetric [[a, b], [b, c]]: eigenvalues (a+c)/2 ± sqrt(((a-c)/2)² + b²).
    let (a, b, c) = (d[0], d[1], d[3]);
    let mid = (a + c) / 2.0;
    let rad = (((a - c) / 2.0).powi(2) + b * b).sqrt();
    (mid + rad).abs().max((mid - rad).abs())
}

fn norm_3x3(d: &[f64]) -> f64 {
    // Trigonometric eigenvalues of a symmetric 3x3 matrix.
    let q = (d[0] + d[4] + d[8]) / 3.0;
    let mut p2 = 2.0 * (d[1] * d[1] + d[2] * d[2] + d[5] * d[5]);
    for &diag in &[d[0], d[4], d[8]] {
        p2 += (diag - q) * (diag - q);
    }
    if p2 <= f64::EPSILON {
        return q.abs();
    }
    let p = (p2 / 6.0).sqrt();
    let b: Vec<f64> = (0..9)
        .map(|i| {
            let shift = if i % 4 == 0 { q } else { 0.0 };
            (d[i] - shift) / p
        })
        .collect();
    let det_b = b[0] * (b[4] * b[8] - b[5] * b[7]) - b[1] * (b[3] * b[8] - b[5] * b[6])
        + b[2] * (b[3] * b[7] - b[4] * b[6]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let eig1 = q + 2.0 * p * phi.cos();
    let eig3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let eig2 = 3.0 * q - eig1 - eig3;
    eig1.abs().max(eig2.abs()).max(eig3.abs())
}

/// The certified ratio ||Γ|| / max_i ||Γ∘D_i|| for the canonical matrix of
/// the class; a lower bound on the best achievable adversary ratio.
pub fn spectral_ratio(cc: &ConceptClass) -> Result<f64, QueryError> {
    if cc.len() < 2 {
        return Err(QueryError::DegenerateClass(
            "spectral ratio needs at least two concepts".into(),
        ));
    }
    let gamma = AdversaryMatrix::from_class(cc);
    let gamma_norm = gamma.operator_norm(DEFAULT_NORM_TOL)?;
    let max_masked = max_masked_norm(cc)?.1;
    if max_masked == 0.0 {
        return Err(QueryError::DegenerateClass(
            "every coordinate is constant across the class".into(),
        ));
    }
    Ok(gamma_norm / max_masked)
}

/// Smallest coordinate index (1-based) attaining the largest closed-form
/// masked norm, together with that norm.
fn max_masked_norm(cc: &ConceptClass) -> Result<(usize, f64), QueryError> {
    let mut best = (1usize, -1.0f64);
    for i in 1..=cc.n_bits() {
        let (zero, one) = cc.mass_split(i)?;
        let norm = (zero * one).sqrt();
        if norm > best.1 {
            best = (i, norm);
        }
    }
    Ok(best)
}

/// A query certified to split the class in a mildly balanced way.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCertificate {
    pub index: usize,
    pub split: f64,
    pub threshold: f64,
    pub gamma_norm: f64,
    pub max_masked_norm: f64,
    pub ratio: f64,
}

/// Finds the coordinate with the largest masked norm and certifies that the
/// smaller side of its split carries mass at least 1/(36·ratio²). Requires
/// max concept mass <= 5/6; the certificate then always holds because the
/// canonical ratio lower-bounds the adversary bound and ||Γ|| >= 1/6.
pub fn certify_split(cc: &ConceptClass) -> Result<SplitCertificate, QueryError> {
    let max_mass = cc.max_mass();
    if max_mass > 5.0 / 6.0 {
        return Err(QueryError::TooConcentrated { max_mass });
    }
    let gamma = AdversaryMatrix::from_class(cc);
    let gamma_norm = gamma.operator_norm(DEFAULT_NORM_TOL)?;
    let (index, max_masked) = max_masked_norm(cc)?;
    if max_masked == 0.0 {
        return Err(QueryError::DegenerateClass(
            "every coordinate is constant across the class".into(),
        ));
    }
    let ratio = gamma_norm / max_masked;
    let (zero, one) = cc.mass_split(index)?;
    Ok(SplitCertificate {
        index,
        split: zero.min(one),
        threshold: 1.0 / (36.0 * ratio * ratio),
        gamma_norm,
        max_masked_norm: max_masked,
        ratio,
    })
}
