//! Dense symmetric matrices and the cyclic Jacobi eigensolver.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Largest dimension accepted by [`jacobi_eigh`].
pub const MAX_EIGH_DIM: usize = 64;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;

/// A real symmetric `d × d` matrix stored row-major.
///
/// Construction always symmetrizes, so `get(i, j) == get(j, i)` holds
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1"));
        }
        Ok(Self {
            dim,
            data: vec![0.0; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        Ok(m)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = v;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries, replacing each off-diagonal
    /// pair with its average.
    pub fn from_row_major(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = data[i * dim + i];
            for j in (i + 1)..dim {
                let v = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_row_major(dim, &flat)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.dim + j] = value;
        self.data[j * self.dim + i] = value;
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::norm2(&self.data)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok(self
            .data
            .chunks_exact(self.dim)
            .map(|row| math::dot(row, x))
            .collect())
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        Ok(self.quadratic_form_unchecked(x))
    }

    pub(crate) fn quadratic_form_unchecked(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (row, &xi) in self.data.chunks_exact(self.dim).zip(x) {
            acc += xi * math::dot(row, x);
        }
        acc
    }

    /// Frobenius distance to another matrix of the same dimension.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_len(other.dim)?;
        let sq: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(math::sqrt(sq))
    }

    /// `Q M Qᵀ` for a row-major orthogonal (or arbitrary) `Q`.
    pub fn conjugate(&self, q: &[f64]) -> Result<Self> {
        let d = self.dim;
        if q.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: q.len(),
            });
        }
        let mut qm = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                qm[i * d + j] = (0..d).map(|k| q[i * d + k] * self.data[k * d + j]).sum();
            }
        }
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| qm[i * d + k] * q[j * d + k]).sum();
            }
        }
        Self::from_row_major(d, &out)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    /// Column-major: eigenvector `k` occupies `[k*d, (k+1)*d)`.
    eigenvectors: Vec<f64>,
    dim: usize,
}

impl EigenDecomposition {
    /// Assembles a decomposition from given eigenpairs, sorting them
    /// non-increasing. Vectors are taken as given (no orthonormalization).
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = eigenvalues.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("empty eigendecomposition"));
        }
        if eigenvectors.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: eigenvectors.len(),
            });
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for v in &eigenvectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            flat.extend_from_slice(v);
        }
        Ok(Self::sorted(dim, eigenvalues, flat))
    }

    fn sorted(dim: usize, values: Vec<f64>, vectors: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        let eigenvalues = order.iter().map(|&k| values[k]).collect();
        let mut eigenvectors = Vec::with_capacity(dim * dim);
        for &k in &order {
            eigenvectors.extend_from_slice(&vectors[k * dim..(k + 1) * dim]);
        }
        Self {
            eigenvalues,
            eigenvectors,
            dim,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k * self.dim..(k + 1) * self.dim]
    }

    pub fn eigenvectors(&self) -> impl Iterator<Item = &[f64]> {
        self.eigenvectors.chunks_exact(self.dim)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Relative cutoff below which an eigenvalue counts as zero:
    /// `1e-10 · max(λ_max, 0)`.
    pub fn zero_tolerance(&self) -> f64 {
        1e-10 * self.max_eigenvalue().max(0.0)
    }

    /// Eigenpairs with `λ > zero_tolerance()`, in non-increasing order.
    /// Fails if some eigenvalue is below `-zero_tolerance()`.
    pub fn positive_part(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let tol = self.zero_tolerance();
        if let Some(&bad) = self.eigenvalues.iter().find(|&&l| l < -tol) {
            return Err(Error::NotPsd {
                eigenvalue: bad,
                tolerance: tol,
            });
        }
        let mut values = Vec::new();
        let mut vectors = Vec::new();
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            if l > tol {
                values.push(l);
                vectors.push(self.eigenvector(k).to_vec());
            }
        }
        Ok((values, vectors))
    }

    /// `E Λ Eᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let d = self.dim;
        let mut out = vec![0.0; d * d];
        for (k, v) in self.eigenvectors().enumerate() {
            let l = self.eigenvalues[k];
            for i in 0..d {
                for j in 0..d {
                    out[i * d + j] += l * v[i] * v[j];
                }
            }
        }
        SymmetricMatrix::from_row_major(d, &out).expect("dimension is consistent")
    }

    /// `‖EᵀE − I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut sq = 0.0;
        for (a, va) in self.eigenvectors().enumerate() {
            for (b, vb) in self.eigenvectors().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                let e = math::dot(va, vb) - target;
                sq += e * e;
            }
        }
        math::sqrt(sq)
    }
}

fn off_diagonal_norm(a: &[f64], d: usize) -> f64 {
    let mut sq = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sq += a[i * d + j] * a[i * d + j];
            }
        }
    }
    math::sqrt(sq)
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over all `(p, q)` pairs, annihilating each off-diagonal entry with
/// a plane rotation, until the off-diagonal Frobenius norm drops below
/// `1e-12 · max(1, ‖A‖_F)`. Gives up after 100 sweeps.
///
/// Each eigenvector is sign-normalized so its largest-magnitude component
/// (earliest on ties) is positive, which makes the output a deterministic
/// function of the input.
pub fn jacobi_eigh(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let d = m.dim();
    if d > MAX_EIGH_DIM {
        return Err(Error::InvalidArgument("jacobi_eigh supports dimension <= 64"));
    }
    let mut a = m.as_row_major().to_vec();
    // v is row-major with eigenvectors as columns.
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    let tol = JACOBI_OFF_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a, d);
    while off > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                // tan of the rotation angle, smaller root for stability
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + math::sqrt(theta * theta + 1.0))
                } else {
                    0.0
                };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                a[p * d + q] = 0.0;
                a[q * d + p] = 0.0;
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a, d);
    }

    let values: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
    let mut columns = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut col: Vec<f64> = (0..d).map(|i| v[i * d + k]).collect();
        let mut lead = 0;
        for i in 1..d {
            if col[i].abs() > col[lead].abs() {
                lead = i;
            }
        }
        if col[lead] < 0.0 {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        columns.extend_from_slice(&col);
    }
    Ok(EigenDecomposition::sorted(d, values, columns))
}

/// `Tr(A^{-1/2})` with the pseudo-inverse convention: eigenvalues at or
/// below `zero_tol` contribute nothing.
pub fn trace_inv_sqrt(eig: &EigenDecomposition, zero_tol: f64) -> Result<f64> {
    let mut acc = 0.0;
    for &l in eig.eigenvalues() {
        if l < -zero_tol {
            return Err(Error::NotPsd {
                eigenvalue: l,
                tolerance: zero_tol,
            });
        }
        if l > zero_tol {
            acc += 1.0 / math::sqrt(l);
        }
    }
    Ok(acc)
}
