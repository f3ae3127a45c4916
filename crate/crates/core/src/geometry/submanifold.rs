//! Parametrized submanifolds and their second fundamental form.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use super::connection::{christoffel, Christoffel};
use super::manifold::ManifoldModel;
use crate::error::{Error, Result};
use crate::numcore::dual::{seed, seed2};
use crate::numcore::poly::Rational;
use crate::numcore::{Mat, Real, D1, D2, D3};

/// Tolerance for "this vector is tangent" preconditions.
pub const TANGENT_TOL: f64 = 1e-9;

pub trait ParamAt<S> {
    fn param(&self, s: &[S]) -> Vec<S>;
}

/// A parametrization `ℝᵏ ⊇ U → M` (in chart coordinates), differentiable up
/// to third order so that lifted submanifolds of bundles stay smooth.
pub trait ParamField: ParamAt<f64> + ParamAt<D1> + ParamAt<D2> + ParamAt<D3> + Send + Sync + Debug {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    /// Parameter of the point of the submanifold closest (in chart terms) to `x`.
    fn locate(&self, x: &[f64]) -> Vec<f64>;
    fn in_domain(&self, _s: &[f64]) -> bool {
        true
    }
    /// Exact tangent vectors (one per parameter) when the parametrization is a
    /// linear map with rational matrix.
    fn rational_basis(&self) -> Option<&[Vec<Rational>]> {
        None
    }
}

/// Jets of a parametrization at one parameter value.
#[derive(Clone, Debug)]
pub struct ParamJet {
    pub point: Vec<f64>,
    /// `n × k`, columns are the coordinate tangent vectors.
    pub jacobian: Mat<f64>,
    /// `hessian[a][b]` is `∂_a∂_b P`.
    pub hessian: Vec<Vec<Vec<f64>>>,
}

pub fn param_jet(p: &dyn ParamField, s: &[f64]) -> ParamJet {
    jet_from_d2(&<dyn ParamField as ParamAt<D2>>::param(p, &seed2(s)), s.len())
}

/// Jet of a map evaluated on [`seed2`]-seeded inputs with `k` variables.
pub fn jet_from_d2(out: &[D2], k: usize) -> ParamJet {
    let n = out.len();
    let point = out.iter().map(|o| o.value.value).collect();
    let jacobian = Mat::from_fn(n, k, |i, a| out[i].value.partial(a));
    let hessian = (0..k).map(|a| (0..k).map(|b| out.iter().map(|o| o.partial(a).partial(b)).collect()).collect()).collect();
    ParamJet { point, jacobian, hessian }
}

/// An embedded submanifold of a chart model, given by a parametrization.
#[derive(Clone, Debug)]
pub struct Submanifold {
    ambient: ManifoldModel,
    field: Arc<dyn ParamField>,
}

impl Submanifold {
    pub fn new(ambient: ManifoldModel, field: impl ParamField + 'static) -> Result<Self> {
        if field.ambient_dim() != ambient.dim() {
            return Err(Error::DimensionMismatch { expected: ambient.dim(), got: field.ambient_dim() });
        }
        Ok(Submanifold { ambient, field: Arc::new(field) })
    }

    pub fn ambient(&self) -> &ManifoldModel {
        &self.ambient
    }

    pub fn field(&self) -> &dyn ParamField {
        &*self.field
    }

    pub fn name(&self) -> String {
        self.field.name()
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn point(&self, s: &[f64]) -> Vec<f64> {
        <dyn ParamField as ParamAt<f64>>::param(&*self.field, s)
    }

    /// The parametrization over any supported scalar.
    pub fn point_at<S>(&self, s: &[S]) -> Vec<S>
    where
        dyn ParamField: ParamAt<S>,
    {
        <dyn ParamField as ParamAt<S>>::param(&*self.field, s)
    }

    pub fn locate(&self, x: &[f64]) -> Vec<f64> {
        self.field.locate(x)
    }

    pub fn jet(&self, s: &[f64]) -> ParamJet {
        param_jet(&*self.field, s)
    }

    /// Coordinate tangent vectors at parameter `s`.
    pub fn tangent_basis(&self, s: &[f64]) -> Vec<Vec<f64>> {
        let out = <dyn ParamField as ParamAt<D1>>::param(&*self.field, &seed(s));
        (0..s.len()).map(|a| out.iter().map(|o| o.partial(a)).collect()).collect()
    }

    /// Chart distance from `x` to the submanifold.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let s = self.locate(x);
        self.ambient.coord_dist(x, &self.point(&s))
    }

    /// `g`-norm of the part of `u` normal to the submanifold at parameter `s`.
    pub fn tangent_residual(&self, s: &[f64], u: &[f64]) -> Result<f64> {
        let jet = self.jet(s);
        let g = self.ambient.metric(&jet.point);
        let (_, r) = tangent_split(&g, &jet.jacobian, u)?;
        Ok(norm_g(&g, &r))
    }

    /// Second fundamental form at the point of the submanifold nearest `x`.
    pub fn second_fundamental_form(&self, x: &[f64], u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let s = self.locate(x);
        let d = self.ambient.coord_dist(x, &self.point(&s));
        if d > TANGENT_TOL {
            return Err(Error::Domain(format!("point is {d:.3e} away from {}", self.name())));
        }
        self.sff_at_param(&s, u, v)
    }

    pub fn sff_at_param(&self, s: &[f64], u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let jet = self.jet(s);
        self.ambient.check_chart(&jet.point)?;
        let g = self.ambient.metric(&jet.point);
        let gam = christoffel(&self.ambient, &jet.point)?;
        second_fundamental_form_core(&g, &gam, &jet, u, v)
    }
}

fn norm_g(g: &Mat<f64>, v: &[f64]) -> f64 {
    let gv = g.matvec(v);
    v.iter().zip(&gv).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
}

/// Writes `u = J α + r` with `r` `g`-orthogonal to the columns of `J`.
pub fn tangent_split(g: &Mat<f64>, jac: &Mat<f64>, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let jt = jac.transpose();
    let gram = jt.matmul(&g.matmul(jac));
    let alpha = gram.solve_vec(&jt.matvec(&g.matvec(u)))?;
    let t = jac.matvec(&alpha);
    let r = u.iter().zip(&t).map(|(a, b)| a - b).collect();
    Ok((alpha, r))
}

/// Second fundamental form from a parametrization jet and the ambient
/// connection: the normal part of `∇_u V`, where `V` extends `v` by the
/// same parameter-space coefficients.
pub fn second_fundamental_form_core(g: &Mat<f64>, gam: &Christoffel<f64>, jet: &ParamJet, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let scale = 1.0_f64.max(norm_g(g, u)).max(norm_g(g, v));
    let (a, ru) = tangent_split(g, &jet.jacobian, u)?;
    let (b, rv) = tangent_split(g, &jet.jacobian, v)?;
    for r in [&ru, &rv] {
        let residual = norm_g(g, r);
        if residual > TANGENT_TOL * scale {
            return Err(Error::NotTangent { residual });
        }
    }
    let ut = jet.jacobian.matvec(&a);
    let vt = jet.jacobian.matvec(&b);
    let mut w = gam.contract(&ut, &vt);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            for (wk, hk) in w.iter_mut().zip(&jet.hessian[i][j]) {
                *wk += ai * bj * hk;
            }
        }
    }
    let (_, normal) = tangent_split(g, &jet.jacobian, &w)?;
    Ok(normal)
}

/// `origin + B s` in a flat chart. Linear sections keep an exact rational
/// copy of `B` for polynomial restriction.
#[derive(Clone, Debug)]
pub struct AffineParam {
    pub name: String,
    pub origin: Vec<f64>,
    /// `n × k`
    pub basis: Mat<f64>,
    pub metric: Mat<f64>,
    pub rational_basis: Option<Vec<Vec<Rational>>>,
}

impl AffineParam {
    /// Linear subspace spanned by rational columns (given as rows here, one per tangent vector).
    pub fn linear(name: &str, columns: Vec<Vec<Rational>>, metric: Mat<f64>) -> Self {
        let n = columns.first().map_or(0, Vec::len);
        let k = columns.len();
        let basis = Mat::from_fn(n, k, |i, a| crate::numcore::poly::to_f64(&columns[a][i]));
        AffineParam { name: name.to_string(), origin: vec![0.0; n], basis, metric, rational_basis: Some(columns) }
    }

    pub fn affine(name: &str, origin: Vec<f64>, basis: Mat<f64>, metric: Mat<f64>) -> Self {
        AffineParam { name: name.to_string(), origin, basis, metric, rational_basis: None }
    }
}

impl<S: Real> ParamAt<S> for AffineParam {
    fn param(&self, s: &[S]) -> Vec<S> {
        (0..self.basis.rows)
            .map(|i| {
                let mut acc = S::cst(self.origin[i]);
                for (a, sa) in s.iter().enumerate() {
                    acc = acc + sa.scale(self.basis[(i, a)]);
                }
                acc
            })
            .collect()
    }
}

impl ParamField for AffineParam {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.basis.cols
    }
    fn ambient_dim(&self) -> usize {
        self.basis.rows
    }
    fn locate(&self, x: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        tangent_split(&self.metric, &self.basis, &d).map(|(a, _)| a).unwrap_or_else(|_| vec![0.0; self.dim()])
    }
    fn rational_basis(&self) -> Option<&[Vec<Rational>]> {
        if self.origin.iter().any(|o| *o != 0.0) {
            return None;
        }
        self.rational_basis.as_deref()
    }
}

/// The great circle `φ ∈ {0, π}` of the unit sphere, parametrized by signed
/// colatitude: `s > 0 ↦ (s, 0)`, `s < 0 ↦ (−s, π)`.
#[derive(Clone, Copy, Debug)]
pub struct SphereMeridian;

impl<S: Real> ParamAt<S> for SphereMeridian {
    fn param(&self, s: &[S]) -> Vec<S> {
        if s[0].re() >= 0.0 {
            vec![s[0].clone(), S::zero()]
        } else {
            vec![-s[0].clone(), S::cst(PI)]
        }
    }
}

impl ParamField for SphereMeridian {
    fn name(&self) -> String {
        "meridian".into()
    }
    fn dim(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn locate(&self, x: &[f64]) -> Vec<f64> {
        if x[1].cos() >= 0.0 {
            vec![x[0]]
        } else {
            vec![-x[0]]
        }
    }
    fn in_domain(&self, s: &[f64]) -> bool {
        s[0] != 0.0 && s[0].abs() < PI
    }
}

/// The circle of constant colatitude `θ₀`, a curve that is not a geodesic
/// unless `θ₀ = π/2`.
#[derive(Clone, Copy, Debug)]
pub struct LatitudeCircle {
    pub colatitude: f64,
}

impl<S: Real> ParamAt<S> for LatitudeCircle {
    fn param(&self, s: &[S]) -> Vec<S> {
        vec![S::cst(self.colatitude), s[0].clone()]
    }
}

impl ParamField for LatitudeCircle {
    fn name(&self) -> String {
        format!("latitude({})", self.colatitude)
    }
    fn dim(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn locate(&self, x: &[f64]) -> Vec<f64> {
        vec![x[1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::poly::int;

    #[test]
    fn linear_subspace_is_totally_geodesic() {
        let m = ManifoldModel::euclidean(3);
        let p = AffineParam::linear("plane", vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(1)]], Mat::identity(3));
        let s = Submanifold::new(m, p).unwrap();
        let b = s.second_fundamental_form(&[0.5, 1.0, 1.0], &[1.0, 2.0, 2.0], &[0.0, 1.0, 1.0]).unwrap();
        assert!(b.iter().all(|v| v.abs() < 1e-14));
        assert!(matches!(s.second_fundamental_form(&[0.5, 1.0, 1.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 1.0]), Err(Error::NotTangent { .. })));
    }

    #[test]
    fn meridian_is_totally_geodesic() {
        let s = Submanifold::new(ManifoldModel::round_sphere(), SphereMeridian).unwrap();
        for x in [[0.4, 0.0], [2.0, PI]] {
            let b = s.second_fundamental_form(&x, &[1.0, 0.0], &[-0.5, 0.0]).unwrap();
            assert!(b.iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn latitude_circle_curvature() {
        let th = PI / 4.0;
        let s = Submanifold::new(ManifoldModel::round_sphere(), LatitudeCircle { colatitude: th }).unwrap();
        // unit tangent: |∂φ| = sin θ
        let u = [0.0, 1.0 / th.sin()];
        let b = s.second_fundamental_form(&[th, 0.3], &u, &u).unwrap();
        let m = ManifoldModel::round_sphere();
        assert!((m.norm(&[th, 0.3], &b) - (th.cos() / th.sin()).abs()).abs() < 1e-12);
    }

    #[test]
    fn sff_is_symmetric() {
        let s = Submanifold::new(ManifoldModel::round_sphere(), LatitudeCircle { colatitude: 1.0 }).unwrap();
        let b1 = s.sff_at_param(&[0.2], &[0.0, 1.5], &[0.0, -0.3]).unwrap();
        let b2 = s.sff_at_param(&[0.2], &[0.0, -0.3], &[0.0, 1.5]).unwrap();
        assert!(b1.iter().zip(&b2).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}
