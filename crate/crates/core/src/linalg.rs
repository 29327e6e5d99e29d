//! Dense real-symmetric matrices and their eigendecompositions.
//!
//! Storage is a `nalgebra` matrix; the eigensolver is `faer`'s self-adjoint
//! decomposition, which is markedly faster on the 2^n oracles.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest dimension accepted for dense storage and full decomposition.
pub const MAX_DENSE_DIM: usize = 4096;

const SYMMETRY_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;
const ORTHO_TOL: f64 = 1e-10;

/// A finite, real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix(DMatrix<f64>);

impl DenseSymMatrix {
    /// Validates squareness, finiteness and symmetry (relative 1e-12).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "matrix has non-finite entries".into(),
            ));
        }
        let scale = m.amax().max(1.0);
        let asym = asymmetry(&m);
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "matrix is not symmetric (max |a_ij - a_ji| = {asym:e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    /// Wraps a matrix built symmetric by construction.
    pub(crate) fn from_symmetric(m: DMatrix<f64>) -> Self {
        debug_assert!(m.is_square());
        debug_assert!(asymmetry(&m) <= SYMMETRY_TOL * m.amax().max(1.0));
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// `P A Pᵀ` where row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        Ok(Self(DMatrix::from_fn(n, n, |i, j| {
            self.0[(perm[i], perm[j])]
        })))
    }
}

/// Largest `|a_ij - a_ji|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Lowest eigenpairs in ascending order; eigenvectors are orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> DVector<f64> {
        self.eigenvectors.column(0).into_owned()
    }

    /// `E1 - E0`, or `None` with fewer than two levels.
    pub fn gap(&self) -> Option<f64> {
        (self.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

fn to_faer(m: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn check_dense(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::TooLarge {
            what: "dense matrix",
            size: dim,
            limit: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

/// Full eigendecomposition of a symmetric matrix, ascending.
///
/// No residual checks; intended for small internal matrices.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let evd = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let values = order.iter().map(|&k| s[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| u[(i, order[c])]);
    Ok((values, vectors))
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn eigenvalues(h: &DenseSymMatrix) -> Result<Vec<f64>> {
    check_dense(h.dim())?;
    if h.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut values = to_faer(h.as_matrix())
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Lowest `k` eigenpairs with residual and orthonormality checks.
pub fn exact_spectrum(h: &DenseSymMatrix, k: usize) -> Result<SpectrumResult> {
    check_dense(h.dim())?;
    let a = h.as_matrix();
    let (values, vectors) = symmetric_eigen(a)?;
    let k = k.min(values.len());
    let norm = values
        .first()
        .into_iter()
        .chain(values.last())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let vectors = vectors.columns(0, k).into_owned();
    let values: Vec<f64> = values[..k].to_vec();

    let av = a * &vectors;
    for (c, &lambda) in values.iter().enumerate() {
        let r = (av.column(c) - vectors.column(c) * lambda).amax();
        if r > RESIDUAL_TOL * norm {
            return Err(Error::ConvergenceFailure(format!(
                "residual {r:e} for eigenpair {c} exceeds {RESIDUAL_TOL:e}·‖A‖"
            )));
        }
    }
    let gram = vectors.transpose() * &vectors;
    let ortho = (gram - DMatrix::identity(k, k)).amax();
    if ortho > ORTHO_TOL {
        return Err(Error::ConvergenceFailure(format!(
            "eigenvectors deviate from orthonormality by {ortho:e}"
        )));
    }
    Ok(SpectrumResult {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

/// `f(A)` for symmetric `A`, through its eigendecomposition.
pub fn symmetric_function(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let (values, v) = symmetric_eigen(m)?;
    let fd = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values.iter().map(|&x| f(x)),
    ));
    Ok(&v * fd * v.transpose())
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.ncols())).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Largest entrywise difference.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    (a - b).amax()
}

/// Absolute difference between two vectors after aligning their global sign.
pub fn sign_aligned_distance(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let s = if dot < 0.0 { -1.0 } else { 1.0 };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - s * y).abs())
        .fold(0.0, f64::max)
}
