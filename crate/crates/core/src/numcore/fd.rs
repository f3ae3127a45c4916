//! Central finite differences, the independent derivative oracle.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Universal oracle step.
pub const FD_STEP: f64 = 1e-5;

/// Central-difference Jacobian of `f` at `x`; rows index outputs.
pub fn finite_diff_jacobian<F>(f: F, x: &[f64], step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Precondition(format!("step must be positive, got {step}")));
    }
    let n = x.len();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + step;
        let fp = f(&xp);
        xp[i] = x[i] - step;
        let fm = f(&xp);
        xp[i] = x[i];
        if fp.len() != fm.len() {
            return Err(Error::DimensionMismatch { expected: fp.len(), got: fm.len() });
        }
        let col: Vec<f64> = fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * step)).collect();
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite difference quotient at {x:?}")));
        }
        cols.push(col);
    }
    let m = cols.first().map_or_else(|| f(x).len(), Vec::len);
    Ok(DMatrix::from_fn(m, n, |r, c| cols[c][r]))
}

/// Central-difference gradient of a scalar function.
pub fn fd_gradient<F>(f: F, x: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let j = finite_diff_jacobian(|p| vec![f(p)], x, step)?;
    Ok(j.row(0).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_linear_maps() {
        let j = finite_diff_jacobian(|x| x.to_vec(), &[0.3, -2.0], FD_STEP).unwrap();
        assert!((j - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-10);
        let a = [[1.0, 2.0, -1.0], [0.5, 0.0, 3.0]];
        let f = |x: &[f64]| a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect();
        let j = finite_diff_jacobian(f, &[1.0, 2.0, 3.0], FD_STEP).unwrap();
        for r in 0..2 {
            for c in 0..3 {
                assert!((j[(r, c)] - a[r][c]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sine_slope_at_origin() {
        // Taylor remainder: |error| <= step^2 / 6.
        let g = fd_gradient(|x| x[0].sin(), &[0.0], FD_STEP).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_step() {
        assert!(finite_diff_jacobian(|x| x.to_vec(), &[1.0], 0.0).is_err());
        assert!(finite_diff_jacobian(|x| x.to_vec(), &[1.0], -1e-3).is_err());
    }
}
