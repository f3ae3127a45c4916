//! Exact linear algebra over the rationals.

use num::{BigInt, One, Signed, Zero};

use super::poly::Rational;

/// Incrementally built reduced row-echelon basis of a span.
///
/// Each stored row remembers how it is written in terms of the pushed input
/// vectors, so membership tests also yield explicit coefficients.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    inputs: usize,
    rows: Vec<EchelonRow>,
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    row: Vec<Rational>,
    combo: Vec<Rational>,
}

/// Result of reducing a vector against an [`EchelonBasis`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// `v - Σ coefficients[i] · input[i]`; zero iff `v` is in the span.
    pub remainder: Vec<Rational>,
    pub coefficients: Vec<Rational>,
}

impl Reduction {
    pub fn in_span(&self) -> bool {
        self.remainder.iter().all(Zero::is_zero)
    }

    /// Largest absolute remainder entry.
    pub fn residual(&self) -> Rational {
        self.remainder.iter().map(|r| r.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, inputs: 0, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Adds an input vector; returns whether it enlarged the span.
    pub fn push(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let k = self.inputs;
        self.inputs += 1;
        for r in &mut self.rows {
            r.combo.push(Rational::zero());
        }
        let red = self.reduce(&v);
        let mut combo: Vec<Rational> = red.coefficients.iter().map(|c| -c.clone()).collect();
        combo[k] = num::One::one();
        let row = red.remainder;
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = row[pivot].clone();
        let row: Vec<Rational> = row.into_iter().map(|x| x / &p).collect();
        let combo: Vec<Rational> = combo.into_iter().map(|x| x / &p).collect();
        for r in &mut self.rows {
            let f = r.row[pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in r.row.iter_mut().zip(&row) {
                *a -= &f * b;
            }
            for (a, b) in r.combo.iter_mut().zip(&combo) {
                *a -= &f * b;
            }
        }
        self.rows.push(EchelonRow { pivot, row, combo });
        true
    }

    pub fn reduce(&self, v: &[Rational]) -> Reduction {
        let mut remainder = v.to_vec();
        let mut coefficients = vec![Rational::zero(); self.inputs];
        for r in &self.rows {
            let f = v[r.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in remainder.iter_mut().zip(&r.row) {
                *a -= &f * b;
            }
            for (a, b) in coefficients.iter_mut().zip(&r.combo) {
                *a += &f * b;
            }
        }
        Reduction { remainder, coefficients }
    }
}

/// Rank of a list of rational vectors of common length `dim`.
pub fn rank(vectors: &[Vec<Rational>], dim: usize) -> usize {
    let mut e = EchelonBasis::new(dim);
    for v in vectors {
        e.push(v.clone());
    }
    e.rank()
}

/// Exact inverse of a square rational matrix (rows), or `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, w) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * w;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Nearest rational with denominator at most `max_den`, if one lies within `tol` of `v`.
pub fn snap_rational(v: f64, max_den: i64, tol: f64) -> Option<Rational> {
    (1..=max_den).find_map(|d| {
        let n = (v * d as f64).round();
        ((v - n / d as f64).abs() <= tol && n.abs() < 1e15).then(|| Rational::new(BigInt::from(n as i64), BigInt::from(d)))
    })
}
