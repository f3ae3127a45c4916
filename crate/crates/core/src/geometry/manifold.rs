use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numcore::{Mat, Real, D1, D2};

/// Metric components `g_ij(x)` evaluated over the scalar `S`.
pub trait MetricAt<S> {
    fn metric(&self, x: &[S]) -> Mat<S>;
}

/// A single-chart Riemannian metric usable with plain floats and with one or
/// two levels of dual numbers (needed for Christoffel symbols and curvature).
pub trait MetricField: MetricAt<f64> + MetricAt<D1> + MetricAt<D2> + Send + Sync + Debug {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn in_chart(&self, x: &[f64]) -> bool;
    /// Period of each coordinate, if it is an angle.
    fn periods(&self) -> Vec<Option<f64>> {
        vec![None; self.dim()]
    }
    /// True when the metric is constant in the chart.
    fn is_flat(&self) -> bool {
        false
    }
}

/// A chart-based Riemannian manifold.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    field: Arc<dyn MetricField>,
}

impl ManifoldModel {
    pub fn new(field: impl MetricField + 'static) -> Self {
        ManifoldModel { field: Arc::new(field) }
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(ConstantMetric::identity(n))
    }

    pub fn constant(name: &str, g: Mat<f64>) -> Self {
        Self::new(ConstantMetric { name: name.to_string(), g })
    }

    pub fn round_sphere() -> Self {
        Self::new(RoundSphere)
    }

    pub fn name(&self) -> String {
        self.field.name()
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn is_flat(&self) -> bool {
        self.field.is_flat()
    }

    pub fn in_chart(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().all(|v| v.is_finite()) && self.field.in_chart(x)
    }

    pub fn check_chart(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        if !self.in_chart(x) {
            return Err(Error::Domain(format!("{x:?} is outside the chart of {}", self.name())));
        }
        Ok(())
    }

    pub fn metric<S>(&self, x: &[S]) -> Mat<S>
    where
        dyn MetricField: MetricAt<S>,
    {
        <dyn MetricField as MetricAt<S>>::metric(&*self.field, x)
    }

    pub fn metric_inverse(&self, x: &[f64]) -> Result<Mat<f64>> {
        self.metric(x).inverse()
    }

    pub fn inner(&self, x: &[f64], u: &[f64], v: &[f64]) -> f64 {
        let g = self.metric(x);
        let gv = g.matvec(v);
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self, x: &[f64], u: &[f64]) -> f64 {
        self.inner(x, u, u).max(0.0).sqrt()
    }

    /// `y - x` with angular coordinates wrapped into `(-p/2, p/2]`.
    pub fn coord_diff(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.field
            .periods()
            .iter()
            .zip(x.iter().zip(y))
            .map(|(p, (a, b))| match p {
                Some(p) => {
                    let d = (b - a).rem_euclid(*p);
                    if d > p / 2.0 {
                        d - p
                    } else {
                        d
                    }
                }
                None => b - a,
            })
            .collect()
    }

    /// Chart-coordinate distance, respecting periodic coordinates.
    pub fn coord_dist(&self, x: &[f64], y: &[f64]) -> f64 {
        self.coord_diff(x, y).iter().map(|d| d * d).sum::<f64>().sqrt()
    }

    pub fn periods(&self) -> Vec<Option<f64>> {
        self.field.periods()
    }
}

/// A constant (hence flat) metric on `ℝⁿ`.
#[derive(Clone, Debug)]
pub struct ConstantMetric {
    pub name: String,
    pub g: Mat<f64>,
}

impl ConstantMetric {
    pub fn identity(n: usize) -> Self {
        ConstantMetric { name: format!("R{n}"), g: Mat::identity(n) }
    }
}

impl<S: Real> MetricAt<S> for ConstantMetric {
    fn metric(&self, _x: &[S]) -> Mat<S> {
        Mat::from_f64(&self.g)
    }
}

impl MetricField for ConstantMetric {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.g.rows
    }
    fn in_chart(&self, _x: &[f64]) -> bool {
        true
    }
    fn is_flat(&self) -> bool {
        true
    }
}

/// Unit sphere in spherical coordinates `(θ, φ)`, `g = diag(1, sin²θ)`.
/// The chart excludes the poles; `φ` is periodic.
#[derive(Clone, Copy, Debug)]
pub struct RoundSphere;

impl<S: Real> MetricAt<S> for RoundSphere {
    fn metric(&self, x: &[S]) -> Mat<S> {
        let s = x[0].sin();
        Mat::from_vec(2, 2, vec![S::one(), S::zero(), S::zero(), s.clone() * s])
    }
}

impl MetricField for RoundSphere {
    fn name(&self) -> String {
        "S2".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn in_chart(&self, x: &[f64]) -> bool {
        x[0] > 0.0 && x[0] < PI
    }
    fn periods(&self) -> Vec<Option<f64>> {
        vec![None, Some(2.0 * PI)]
    }
}

/// Embedding of sphere chart coordinates into `ℝ³`.
pub fn sphere_to_r3<S: Real>(x: &[S]) -> [S; 3] {
    let (st, ct) = (x[0].sin(), x[0].cos());
    [st.clone() * x[1].cos(), st * x[1].sin(), ct]
}
