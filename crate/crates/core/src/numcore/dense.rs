//! Small dense matrices over any [`Real`] scalar, so group elements,
//! metrics and their inverses can carry dual-number derivatives.

use std::ops::{Index, IndexMut};

use super::dual::Real;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Real> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Embeds an `f64` matrix as constants.
    pub fn from_f64(m: &Mat<f64>) -> Self {
        Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|v| S::cst(*v)).collect() }
    }

    pub fn map<T: Real>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn re(&self) -> Mat<f64> {
        self.map(|v| v.re())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul shape");
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                acc = acc + self[(i, k)].clone() * o[(k, j)].clone();
            }
            acc
        })
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn scaled(&self, k: &S) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    /// Largest absolute entry of the real part.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.re().abs()).fold(0.0, f64::max)
    }

    /// Solves `self · X = rhs` by Gaussian elimination with partial pivoting
    /// on the real parts.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows, "solve rhs shape");
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (piv, best) = (col..n).map(|r| (r, a[(r, col)].re().abs())).fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= 1e-14 * scale {
                return Err(Error::Singular(format!("pivot {best:e} in column {col}")));
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                for j in 0..b.cols {
                    b.data.swap(piv * b.cols + j, col * b.cols + j);
                }
            }
            let p = a[(col, col)].clone();
            for r in (col + 1)..n {
                let f = a[(r, col)].clone() / p.clone();
                for j in col..n {
                    let v = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    a[(r, j)] = v;
                }
                for j in 0..b.cols {
                    let v = b[(r, j)].clone() - f.clone() * b[(col, j)].clone();
                    b[(r, j)] = v;
                }
            }
        }
        let mut x = Self::zeros(n, b.cols);
        for j in 0..b.cols {
            for i in (0..n).rev() {
                let mut acc = b[(i, j)].clone();
                for k in (i + 1)..n {
                    acc = acc - a[(i, k)].clone() * x[(k, j)].clone();
                }
                x[(i, j)] = acc / a[(i, i)].clone();
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, rhs: &[S]) -> Result<Vec<S>> {
        let b = Self::from_vec(rhs.len(), 1, rhs.to_vec());
        Ok(self.solve(&b)?.data)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// Determinant by elimination (real-part pivoting).
    pub fn det(&self) -> S {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let piv = (col..n).max_by(|&r, &s| a[(r, col)].re().abs().total_cmp(&a[(s, col)].re().abs())).unwrap_or(col);
            if a[(piv, col)].re() == 0.0 {
                return S::zero();
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = det * p.clone();
            for r in (col + 1)..n {
                let f = a[(r, col)].clone() / p.clone();
                for j in col..n {
                    let v = a[(r, j)].clone() - f.clone() * a[(col, j)].clone();
                    a[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn exp(&self) -> Self {
        let n = self.rows;
        let norm: f64 = (0..n).map(|i| (0..n).map(|j| self[(i, j)].re().abs()).sum::<f64>()).fold(0.0, f64::max);
        let mut squarings = 0u32;
        let mut s = 1.0;
        while norm * s > 0.25 {
            s *= 0.5;
            squarings += 1;
        }
        let a = self.map(|v| v.scale(s));
        let mut term = Self::identity(n);
        let mut acc = Self::identity(n);
        for k in 1..=18 {
            term = term.matmul(&a).map(|v| v.scale(1.0 / k as f64));
            acc = acc.add(&term);
        }
        for _ in 0..squarings {
            acc = acc.matmul(&acc);
        }
        acc
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat<f64> {
    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Frobenius distance.
    pub fn dist(&self, o: &Self) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}
