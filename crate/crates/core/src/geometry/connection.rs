//! Levi-Civita connection and curvature from dual-number derivatives of the
//! metric.

use super::manifold::{ManifoldModel, MetricAt, MetricField};
use crate::error::Result;
use crate::numcore::dual::{seed, values};
use crate::numcore::{Dual, Mat, Real};

/// Christoffel symbols `Γ^k_{ij}` stored as `data[(k*n + i)*n + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Real> Christoffel<S> {
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.data[(k * self.n + i) * self.n + j].clone()
    }

    /// `Γ(u, v)^k = Γ^k_{ij} uⁱ vʲ`.
    pub fn contract(&self, u: &[S], v: &[S]) -> Vec<S> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = S::zero();
                for i in 0..n {
                    for j in 0..n {
                        acc = acc + self.get(k, i, j) * u[i].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }
}

/// Metric values and `∂_l g_{ij}` (stored `[(l*n + i)*n + j]`).
fn metric_jet<S: Real>(metric: impl Fn(&[Dual<S>]) -> Result<Mat<Dual<S>>>, x: &[S]) -> Result<(Mat<S>, Vec<S>)> {
    let n = x.len();
    let g = metric(&seed(x))?;
    let vals = Mat::from_vec(n, n, values(&g.data));
    let mut dg = Vec::with_capacity(n * n * n);
    for l in 0..n {
        for e in &g.data {
            dg.push(e.partial(l));
        }
    }
    Ok((vals, dg))
}

/// Christoffel symbols of an arbitrary coordinate metric, differentiated
/// with one extra dual level.
pub fn christoffel_of<S: Real>(metric: impl Fn(&[Dual<S>]) -> Result<Mat<Dual<S>>>, x: &[S]) -> Result<Christoffel<S>> {
    let n = x.len();
    let (g, dg) = metric_jet(metric, x)?;
    let ginv = g.inverse()?;
    let d = |l: usize, i: usize, j: usize| dg[(l * n + i) * n + j].clone();
    let mut data = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = S::zero();
                for l in 0..n {
                    acc = acc + ginv[(k, l)].clone() * (d(i, j, l) + d(j, i, l) - d(l, i, j));
                }
                data.push(acc.scale(0.5));
            }
        }
    }
    Ok(Christoffel { n, data })
}

/// Christoffel symbols over any scalar whose dual the metric accepts.
pub fn christoffel_at<S: Real>(m: &ManifoldModel, x: &[S]) -> Result<Christoffel<S>>
where
    dyn MetricField: MetricAt<Dual<S>>,
{
    christoffel_of(|y: &[Dual<S>]| Ok(m.metric(y)), x)
}

pub fn christoffel(m: &ManifoldModel, x: &[f64]) -> Result<Christoffel<f64>> {
    m.check_chart(x)?;
    christoffel_at(m, x)
}

/// Riemann tensor with `R(∂_i, ∂_j)∂_k = R^l_{ijk} ∂_l`, i.e.
/// `R^l_{ijk} = ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureValue {
    pub n: usize,
    /// `data[((l*n + i)*n + j)*n + k] = R^l_{ijk}`
    pub data: Vec<f64>,
}

impl CurvatureValue {
    pub fn get(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        let n = self.n;
        self.data[((l * n + i) * n + j) * n + k]
    }

    /// `R(a, b)c`.
    pub fn apply(&self, a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|l| {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            acc += self.get(l, i, j, k) * a[i] * b[j] * c[k];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn riemann(m: &ManifoldModel, x: &[f64]) -> Result<CurvatureValue> {
    m.check_chart(x)?;
    let n = x.len();
    let gam = christoffel_at(m, &seed(x))?;
    let g0 = |l: usize, i: usize, j: usize| gam.get(l, i, j).value;
    let dg = |d: usize, l: usize, i: usize, j: usize| gam.get(l, i, j).partial(d);
    let mut data = Vec::with_capacity(n * n * n * n);
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut r = dg(i, l, j, k) - dg(j, l, i, k);
                    for mm in 0..n {
                        r += g0(l, i, mm) * g0(mm, j, k) - g0(l, j, mm) * g0(mm, i, k);
                    }
                    data.push(r);
                }
            }
        }
    }
    Ok(CurvatureValue { n, data })
}

/// Sectional curvature of the plane spanned by `u, v`.
pub fn sectional_curvature(m: &ManifoldModel, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    let r = riemann(m, x)?;
    let rvv = r.apply(u, v, v);
    let num = m.inner(x, &rvv, u);
    let den = m.inner(x, u, u) * m.inner(x, v, v) - m.inner(x, u, v).powi(2);
    Ok(num / den)
}

/// Covariant derivative `∇_u Y` of a field given by its value `y` and
/// Jacobian `dy[(a, i)] = ∂_i Yᵃ` at `x`.
pub fn covariant_derivative(m: &ManifoldModel, x: &[f64], u: &[f64], y: &[f64], dy: &Mat<f64>) -> Result<Vec<f64>> {
    let gam = christoffel(m, x)?;
    let dyu = dy.matvec(u);
    let corr = gam.contract(u, y);
    Ok(dyu.iter().zip(&corr).map(|(a, b)| a + b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_space_has_no_connection_or_curvature() {
        let m = ManifoldModel::euclidean(3);
        let g = christoffel(&m, &[0.1, 2.0, -1.0]).unwrap();
        assert!(g.data.iter().all(|v| *v == 0.0));
        assert_eq!(riemann(&m, &[0.1, 2.0, -1.0]).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn sphere_christoffel_closed_form() {
        let m = ManifoldModel::round_sphere();
        let th: f64 = 0.8;
        let g = christoffel(&m, &[th, 0.3]).unwrap();
        assert!((g.get(0, 1, 1) + th.sin() * th.cos()).abs() < 1e-14);
        assert!((g.get(1, 0, 1) - th.cos() / th.sin()).abs() < 1e-14);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert!((g.get(k, i, j) - g.get(k, j, i)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unit_sphere_sectional_curvature_is_one() {
        let m = ManifoldModel::round_sphere();
        let k = sectional_curvature(&m, &[1.1, 0.4], &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k - 1.0).abs() < 1e-6);
    }

    #[test]
    fn first_bianchi_identity() {
        let m = ManifoldModel::round_sphere();
        let r = riemann(&m, &[0.6, -0.2]).unwrap();
        for l in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let s = r.get(l, i, j, k) + r.get(l, j, k, i) + r.get(l, k, i, j);
                        assert!(s.abs() < 1e-8);
                    }
                }
            }
        }
    }
}
