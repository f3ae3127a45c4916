//! Points and tangent vectors of `TM` and `T*M`, the horizontal/vertical
//! splitting, the Sasaki metric, `J` and the symplectic form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{christoffel, christoffel_at, Christoffel, ManifoldModel, MetricAt, MetricField};
use crate::numcore::{Dual, Mat, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleKind {
    Tangent,
    Cotangent,
}

/// `(x, v) ∈ TM` or `(x, ξ) ∈ T*M` in chart coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundlePoint {
    pub base: Vec<f64>,
    pub fiber: Vec<f64>,
    pub kind: BundleKind,
}

impl BundlePoint {
    pub fn cotangent(base: Vec<f64>, covector: Vec<f64>) -> Self {
        BundlePoint { base, fiber: covector, kind: BundleKind::Cotangent }
    }

    pub fn tangent(base: Vec<f64>, vector: Vec<f64>) -> Self {
        BundlePoint { base, fiber: vector, kind: BundleKind::Tangent }
    }

    /// Cotangent point whose covector is the flat of `v`.
    pub fn from_sharp(m: &ManifoldModel, base: Vec<f64>, v: &[f64]) -> Self {
        let xi = flat(m, &base, v);
        Self::cotangent(base, xi)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Concatenated bundle coordinates `(x, fiber)`.
    pub fn coords(&self) -> Vec<f64> {
        self.base.iter().chain(&self.fiber).copied().collect()
    }

    pub fn from_coords(kind: BundleKind, c: &[f64]) -> Self {
        let n = c.len() / 2;
        BundlePoint { base: c[..n].to_vec(), fiber: c[n..].to_vec(), kind }
    }

    /// `ξ^♯` for cotangent points, `v` itself for tangent points.
    pub fn vector(&self, m: &ManifoldModel) -> Vec<f64> {
        match self.kind {
            BundleKind::Cotangent => sharp(m, &self.base, &self.fiber),
            BundleKind::Tangent => self.fiber.clone(),
        }
    }

    pub fn check(&self, m: &ManifoldModel) -> Result<()> {
        m.check_chart(&self.base)?;
        if self.fiber.len() != self.base.len() {
            return Err(Error::DimensionMismatch { expected: self.base.len(), got: self.fiber.len() });
        }
        if !self.fiber.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("non-finite fiber coordinates".into()));
        }
        Ok(())
    }
}

/// Tangent vector to the bundle written in the splitting: horizontal part
/// `dπ Z` and vertical part (the `I_g` image of the fiber component).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleTangent {
    pub horizontal: Vec<f64>,
    pub vertical: Vec<f64>,
}

impl BundleTangent {
    pub fn new(horizontal: Vec<f64>, vertical: Vec<f64>) -> Self {
        BundleTangent { horizontal, vertical }
    }

    pub fn zero(n: usize) -> Self {
        BundleTangent { horizontal: vec![0.0; n], vertical: vec![0.0; n] }
    }

    pub fn stacked(&self) -> Vec<f64> {
        self.horizontal.iter().chain(&self.vertical).copied().collect()
    }

    pub fn from_stacked(w: &[f64]) -> Self {
        let n = w.len() / 2;
        BundleTangent { horizontal: w[..n].to_vec(), vertical: w[n..].to_vec() }
    }

    pub fn scaled(&self, k: f64) -> Self {
        BundleTangent {
            horizontal: self.horizontal.iter().map(|v| v * k).collect(),
            vertical: self.vertical.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        BundleTangent {
            horizontal: self.horizontal.iter().zip(&o.horizontal).map(|(a, b)| a + b).collect(),
            vertical: self.vertical.iter().zip(&o.vertical).map(|(a, b)| a + b).collect(),
        }
    }
}

pub fn sharp(m: &ManifoldModel, x: &[f64], xi: &[f64]) -> Vec<f64> {
    m.metric(x).solve_vec(xi).expect("metric is positive definite on the chart")
}

pub fn flat(m: &ManifoldModel, x: &[f64], v: &[f64]) -> Vec<f64> {
    m.metric(x).matvec(v)
}

/// `M^l_i = Γ^k_{il} ξ_k`, the vertical correction of horizontal lifts on `T*M`.
fn cotangent_correction(gam: &Christoffel<f64>, xi: &[f64]) -> Mat<f64> {
    let n = xi.len();
    Mat::from_fn(n, n, |l, i| (0..n).map(|k| gam.get(k, i, l) * xi[k]).sum())
}

/// `C^l_i = Γ^l_{ik} v^k`, the vertical correction of horizontal lifts on `TM`.
fn tangent_correction<S: Real>(gam: &Christoffel<S>, v: &[S]) -> Mat<S> {
    let n = v.len();
    Mat::from_fn(n, n, |l, i| {
        let mut acc = S::zero();
        for (k, vk) in v.iter().enumerate() {
            acc = acc + gam.get(l, i, k) * vk.clone();
        }
        acc
    })
}

/// Coordinate frame of the splitting: `2n × 2n` matrix whose columns are the
/// coordinate vectors of `(e_i, 0)` and `(0, e_i)`.
pub fn splitting_frame(m: &ManifoldModel, bp: &BundlePoint) -> Result<Mat<f64>> {
    bp.check(m)?;
    let n = bp.dim();
    let gam = christoffel(m, &bp.base)?;
    let mut f = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        f[(i, i)] = 1.0;
    }
    match bp.kind {
        BundleKind::Cotangent => {
            let c = cotangent_correction(&gam, &bp.fiber);
            let g = m.metric(&bp.base);
            for l in 0..n {
                for i in 0..n {
                    f[(n + l, i)] = c[(l, i)];
                    f[(n + l, n + i)] = g[(l, i)];
                }
            }
        }
        BundleKind::Tangent => {
            let c = tangent_correction(&gam, &bp.fiber);
            for l in 0..n {
                for i in 0..n {
                    f[(n + l, i)] = -c[(l, i)];
                }
                f[(n + l, n + l)] = 1.0;
            }
        }
    }
    Ok(f)
}

/// Coordinate components of a bundle tangent.
pub fn to_coords(m: &ManifoldModel, bp: &BundlePoint, z: &BundleTangent) -> Result<Vec<f64>> {
    Ok(splitting_frame(m, bp)?.matvec(&z.stacked()))
}

/// Splitting components of a coordinate tangent vector.
pub fn from_coords(m: &ManifoldModel, bp: &BundlePoint, w: &[f64]) -> Result<BundleTangent> {
    Ok(BundleTangent::from_stacked(&splitting_frame(m, bp)?.solve_vec(w)?))
}

/// Coordinate components of the horizontal lift of `X ∈ T_xM`.
pub fn horizontal_lift(m: &ManifoldModel, bp: &BundlePoint, x: &[f64]) -> Result<Vec<f64>> {
    to_coords(m, bp, &BundleTangent::new(x.to_vec(), vec![0.0; x.len()]))
}

pub fn sasaki_inner(m: &ManifoldModel, bp: &BundlePoint, z1: &BundleTangent, z2: &BundleTangent) -> f64 {
    m.inner(&bp.base, &z1.horizontal, &z2.horizontal) + m.inner(&bp.base, &z1.vertical, &z2.vertical)
}

/// Gram matrix of the Sasaki metric in bundle coordinates.
pub fn sasaki_gram(m: &ManifoldModel, bp: &BundlePoint) -> Result<Mat<f64>> {
    let f = splitting_frame(m, bp)?;
    let finv = f.inverse()?;
    let g = m.metric(&bp.base);
    let n = bp.dim();
    let block = Mat::from_fn(2 * n, 2 * n, |i, j| if (i < n) == (j < n) { g[(i % n, j % n)] } else { 0.0 });
    Ok(finv.transpose().matmul(&block).matmul(&finv))
}

/// `J(X, Y) = (−Y, X)`.
pub fn apply_j(z: &BundleTangent) -> BundleTangent {
    BundleTangent { horizontal: z.vertical.iter().map(|v| -v).collect(), vertical: z.horizontal.clone() }
}

/// `Ω(Z₁, Z₂) = g̃(J Z₁, Z₂)`.
pub fn symplectic_form(m: &ManifoldModel, bp: &BundlePoint, z1: &BundleTangent, z2: &BundleTangent) -> f64 {
    sasaki_inner(m, bp, &apply_j(z1), z2)
}

/// `Σ dx^i ∧ dξ_i` on coordinate vectors `(dx, dξ)`.
pub fn canonical_form(w1: &[f64], w2: &[f64]) -> f64 {
    let n = w1.len() / 2;
    (0..n).map(|i| w1[i] * w2[n + i] - w1[n + i] * w2[i]).sum()
}

/// Gram matrix of `Ω` in bundle coordinates.
pub fn symplectic_gram(m: &ManifoldModel, bp: &BundlePoint) -> Result<Mat<f64>> {
    let f = splitting_frame(m, bp)?;
    let finv = f.inverse()?;
    let n = bp.dim();
    let basis: Vec<BundleTangent> =
        (0..2 * n).map(|c| BundleTangent::from_stacked(&(0..2 * n).map(|r| finv[(r, c)]).collect::<Vec<_>>())).collect();
    Ok(Mat::from_fn(2 * n, 2 * n, |i, j| symplectic_form(m, bp, &basis[i], &basis[j])))
}

/// The Sasaki metric of `TM` in coordinates `(x, v)`, over any scalar for
/// which the base Christoffel symbols can be formed.
pub fn tm_sasaki_metric<S: Real>(m: &ManifoldModel, p: &[S]) -> Result<Mat<S>>
where
    dyn MetricField: MetricAt<Dual<S>> + MetricAt<S>,
{
    let n = p.len() / 2;
    let (x, v) = p.split_at(n);
    let gam = christoffel_at(m, x)?;
    let g: Mat<S> = m.metric(x);
    let c = tangent_correction(&gam, v);
    let gc = g.matmul(&c);
    let ctgc = c.transpose().matmul(&gc);
    Ok(Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => g[(i, j)].clone() + ctgc[(i, j)].clone(),
        (true, false) => gc[(j - n, i)].clone(),
        (false, true) => gc[(i - n, j)].clone(),
        (false, false) => g[(i - n, j - n)].clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sharp_flat_on_sphere() {
        let m = ManifoldModel::round_sphere();
        let x = [PI / 2.0, 0.0];
        let v = sharp(&m, &x, &[0.0, 1.0]);
        assert!((v[1] - 1.0).abs() < 1e-15);
        let y = [0.7, 0.1];
        let back = flat(&m, &y, &sharp(&m, &y, &[0.3, -2.0]));
        assert!((back[0] - 0.3).abs() < 1e-12 && (back[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn horizontal_lift_at_equator() {
        let m = ManifoldModel::round_sphere();
        let bp = BundlePoint::cotangent(vec![PI / 2.0, 0.0], vec![1.0, 0.0]);
        let h = horizontal_lift(&m, &bp, &[0.0, 1.0]).unwrap();
        assert!(h[2].abs() < 1e-15);
        assert_eq!(&h[..2], &[0.0, 1.0]);
    }

    #[test]
    fn flat_sasaki_metric_is_euclidean() {
        let m = ManifoldModel::euclidean(2);
        let bp = BundlePoint::cotangent(vec![0.3, 1.0], vec![2.0, -1.0]);
        assert_eq!(sasaki_gram(&m, &bp).unwrap(), Mat::identity(4));
        let j = apply_j(&BundleTangent::new(vec![1.0], vec![0.0]));
        assert_eq!(j, BundleTangent::new(vec![-0.0], vec![1.0]));
    }

    #[test]
    fn omega_is_canonical_form() {
        let m = ManifoldModel::round_sphere();
        let bp = BundlePoint::cotangent(vec![1.1, 0.4], vec![0.7, -1.3]);
        let z1 = BundleTangent::new(vec![0.2, 1.0], vec![-0.5, 0.3]);
        let z2 = BundleTangent::new(vec![1.4, -0.1], vec![0.9, 0.6]);
        let w1 = to_coords(&m, &bp, &z1).unwrap();
        let w2 = to_coords(&m, &bp, &z2).unwrap();
        assert!((symplectic_form(&m, &bp, &z1, &z2) - canonical_form(&w1, &w2)).abs() < 1e-12);
    }

    #[test]
    fn tm_metric_matches_splitting() {
        let m = ManifoldModel::round_sphere();
        let bp = BundlePoint::tangent(vec![0.9, 0.2], vec![0.4, 1.1]);
        let gram = sasaki_gram(&m, &bp).unwrap();
        let direct = tm_sasaki_metric(&m, &bp.coords()).unwrap();
        assert!(gram.dist(&direct) < 1e-12);
    }
}
