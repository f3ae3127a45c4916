//! Dense floating-point linear algebra on top of `nalgebra`'s SVD.
//!
//! Every rank decision goes through [`numerical_rank`] with a threshold
//! relative to the largest singular value.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative rank threshold for least squares.
pub const LSQ_RANK_TOL: f64 = 1e-10;
/// Relative rank threshold for geometric dimension counts.
pub const DIM_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct LinSolveReport {
    pub solution: Vec<f64>,
    pub residual_norm: f64,
    pub rank: usize,
}

/// Singular values together with a full right-singular basis (rows of `vt`).
fn full_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    (svd.singular_values.iter().copied().collect(), vt)
}

pub fn numerical_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let s = a.singular_values();
    let smax = s.max();
    if smax <= 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * smax).count()
}

/// Minimum-norm least-squares solution of `A x ≈ b`.
pub fn least_squares(a: &DMatrix<f64>, b: &[f64]) -> Result<LinSolveReport> {
    if a.ncols() == 0 || a.nrows() == 0 {
        return Err(Error::Empty);
    }
    if b.len() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.len() });
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let eps = LSQ_RANK_TOL * smax;
    let rank = svd.singular_values.iter().filter(|&&v| v > eps).count();
    let rhs = DVector::from_column_slice(b);
    let x = if smax > 0.0 { svd.solve(&rhs, eps).map_err(|e| Error::Singular(e.to_string()))? } else { DVector::zeros(a.ncols()) };
    let residual_norm = (a * &x - rhs).norm();
    Ok(LinSolveReport { solution: x.iter().copied().collect(), residual_norm, rank })
}

/// Orthonormal (Euclidean) basis of `{x : A x = 0}`.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return (0..n).map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    }
    let (s, vt) = full_svd(a);
    let smax = s.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    for i in 0..vt.nrows() {
        let sv = s.get(i).copied().unwrap_or(0.0);
        if smax == 0.0 || sv <= rel_tol * smax {
            out.push(vt.row(i).transpose());
        }
    }
    out
}

/// Whitening pair for an inner product `g = L Lᵀ`: returns `(Lᵀ, L⁻ᵀ)`.
fn whitening(g: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let chol = g.clone().cholesky().ok_or_else(|| Error::Singular("inner product is not positive definite".into()))?;
    let l = chol.l();
    let lt = l.transpose();
    let lt_inv = lt.clone().try_inverse().ok_or_else(|| Error::Singular("cholesky factor".into()))?;
    Ok((lt, lt_inv))
}

fn columns(vs: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    if vs.is_empty() {
        return DMatrix::zeros(dim, 0);
    }
    DMatrix::from_columns(vs)
}

/// `g`-orthonormal basis of the span of `vs` (rank-revealing).
pub fn orthonormal_span(vs: &[DVector<f64>], g: &DMatrix<f64>, rel_tol: f64) -> Result<Vec<DVector<f64>>> {
    let dim = g.nrows();
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let (lt, lt_inv) = whitening(g)?;
    let y = &lt * columns(vs, dim);
    let svd = y.svd(true, false);
    let u = svd.u.expect("u requested");
    let smax = svd.singular_values.max();
    let mut out = Vec::new();
    for (i, sv) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && *sv > rel_tol * smax {
            out.push(&lt_inv * u.column(i));
        }
    }
    Ok(out)
}

/// `g`-orthonormal basis of the `g`-orthogonal complement of `span(vs)`.
pub fn orthogonal_complement(vs: &[DVector<f64>], g: &DMatrix<f64>, rel_tol: f64) -> Result<Vec<DVector<f64>>> {
    let dim = g.nrows();
    let (lt, lt_inv) = whitening(g)?;
    let y = &lt * columns(vs, dim);
    let null = null_space(&y.transpose(), rel_tol);
    Ok(null.into_iter().map(|v| &lt_inv * v).collect())
}

/// `g`-norm of the component of `v` outside the span of a `g`-orthonormal basis.
pub fn span_residual(v: &DVector<f64>, basis: &[DVector<f64>], g: &DMatrix<f64>) -> f64 {
    let mut r = v.clone();
    for b in basis {
        let c = (b.transpose() * g * v)[(0, 0)];
        r -= b * c;
    }
    (r.transpose() * g * &r)[(0, 0)].max(0.0).sqrt()
}

/// Largest `|⟨a, b⟩_g|` over all pairs.
pub fn max_cross_inner(a: &[DVector<f64>], b: &[DVector<f64>], g: &DMatrix<f64>) -> f64 {
    let mut m: f64 = 0.0;
    for u in a {
        for v in b {
            m = m.max((u.transpose() * g * v)[(0, 0)].abs());
        }
    }
    m
}
