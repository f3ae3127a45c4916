//! Isometric actions of matrix groups on chart models and their
//! infinitesimal generators.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::group::{AlgebraElement, GroupElement, MatrixGroup};
use crate::error::{Error, Result};
use crate::geometry::{christoffel, ManifoldModel};
use crate::numcore::dual::{lift, seed};
use crate::numcore::linalg::{null_space, DIM_RANK_TOL};
use crate::numcore::{Dual, Mat, Real, D1, D2};

pub trait ActAt<S> {
    fn act(&self, g: &Mat<S>, x: &[S]) -> Vec<S>;
}

/// Action map, differentiable in both the group matrix and the point.
pub trait ActionField: ActAt<f64> + ActAt<D1> + ActAt<D2> + Send + Sync + Debug {
    fn name(&self) -> String;
    /// True for linear representations `x ↦ ρ(g) x`.
    fn is_linear(&self) -> bool;
}

/// `x ↦ g x`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixVectorAction;

impl<S: Real> ActAt<S> for MatrixVectorAction {
    fn act(&self, g: &Mat<S>, x: &[S]) -> Vec<S> {
        g.matvec(x)
    }
}

impl ActionField for MatrixVectorAction {
    fn name(&self) -> String {
        "matrix-vector".into()
    }
    fn is_linear(&self) -> bool {
        true
    }
}

/// Conjugation `A ↦ g A gᵀ` on traceless symmetric `3×3` matrices in the
/// coordinates `(a₁₁, a₂₂, a₁₂, a₁₃, a₂₃)`.
#[derive(Clone, Copy, Debug)]
pub struct SymmetricConjugation;

pub fn sym0_matrix<S: Real>(x: &[S]) -> Mat<S> {
    let a33 = -(x[0].clone() + x[1].clone());
    Mat::from_vec(
        3,
        3,
        vec![x[0].clone(), x[2].clone(), x[3].clone(), x[2].clone(), x[1].clone(), x[4].clone(), x[3].clone(), x[4].clone(), a33],
    )
}

pub fn sym0_coords<S: Real>(a: &Mat<S>) -> Vec<S> {
    vec![a[(0, 0)].clone(), a[(1, 1)].clone(), a[(0, 1)].clone(), a[(0, 2)].clone(), a[(1, 2)].clone()]
}

impl<S: Real> ActAt<S> for SymmetricConjugation {
    fn act(&self, g: &Mat<S>, x: &[S]) -> Vec<S> {
        sym0_coords(&g.matmul(&sym0_matrix(x)).matmul(&g.transpose()))
    }
}

impl ActionField for SymmetricConjugation {
    fn name(&self) -> String {
        "conjugation".into()
    }
    fn is_linear(&self) -> bool {
        true
    }
}

/// `SO(2)` rotating the sphere chart `(θ, φ)` about the polar axis. The
/// longitude is reported in `(−π, π]`.
#[derive(Clone, Copy, Debug)]
pub struct AxialRotation;

impl<S: Real> ActAt<S> for AxialRotation {
    fn act(&self, g: &Mat<S>, x: &[S]) -> Vec<S> {
        let alpha = g[(1, 0)].atan2(&g[(0, 0)]);
        let phi = x[1].clone() + alpha;
        let wraps = ((phi.re() + PI) / (2.0 * PI)).ceil() - 1.0;
        vec![x[0].clone(), phi - S::cst(2.0 * PI * wraps)]
    }
}

impl ActionField for AxialRotation {
    fn name(&self) -> String {
        "axial-rotation".into()
    }
    fn is_linear(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug)]
pub struct Action {
    pub group: Arc<MatrixGroup>,
    pub manifold: ManifoldModel,
    field: Arc<dyn ActionField>,
}

impl Action {
    pub fn new(group: MatrixGroup, manifold: ManifoldModel, field: impl ActionField + 'static) -> Self {
        Action { group: Arc::new(group), manifold, field: Arc::new(field) }
    }

    pub fn is_linear(&self) -> bool {
        self.field.is_linear()
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn act(&self, g: &GroupElement, x: &[f64]) -> Vec<f64> {
        self.act_at(&g.matrix, x)
    }

    pub fn act_at<S>(&self, g: &Mat<S>, x: &[S]) -> Vec<S>
    where
        dyn ActionField: ActAt<S>,
    {
        <dyn ActionField as ActAt<S>>::act(&*self.field, g, x)
    }

    /// Jacobian of `x ↦ g·x`.
    pub fn differential(&self, g: &GroupElement, x: &[f64]) -> Mat<f64> {
        let gm: Mat<D1> = Mat::from_f64(&g.matrix);
        let out = self.act_at(&gm, &seed(x));
        Mat::from_fn(out.len(), x.len(), |i, j| out[i].partial(j))
    }

    /// `X*(x)` over any scalar whose dual the action accepts.
    pub fn generator_at<S: Real>(&self, xi: &AlgebraElement, x: &[S]) -> Vec<S>
    where
        dyn ActionField: ActAt<Dual<S>>,
    {
        let t = Dual::var(S::zero(), 0, 1);
        let g = self.group.exp_at(xi, &t);
        self.act_at(&g, &lift(x)).into_iter().map(|o| o.partial(0)).collect()
    }

    /// `X*(x) = d/dt|₀ exp(tX)·x`.
    pub fn generator_field(&self, xi: &AlgebraElement, x: &[f64]) -> Result<Vec<f64>> {
        self.manifold.check_chart(x)?;
        self.group.check_algebra(xi)?;
        Ok(self.generator_at(xi, x))
    }

    /// Value and Jacobian `∂_i X^j` of a generator field.
    pub fn generator_jet(&self, xi: &AlgebraElement, x: &[f64]) -> (Vec<f64>, Mat<f64>) {
        let out = self.generator_at(xi, &seed(x));
        let val = out.iter().map(|o| o.value).collect();
        (val, Mat::from_fn(out.len(), x.len(), |j, i| out[j].partial(i)))
    }

    /// All generator fields at `x`, one per basis element.
    pub fn generators(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.group.dim()).map(|a| self.generator_at(&AlgebraElement::basis(self.group.dim(), a), x)).collect()
    }

    /// Basis of `{X : X*(x) = 0}`.
    pub fn isotropy_algebra(&self, x: &[f64]) -> Result<Vec<AlgebraElement>> {
        self.manifold.check_chart(x)?;
        let gens = self.generators(x);
        let a = DMatrix::from_fn(x.len(), gens.len(), |i, j| gens[j][i]);
        Ok(null_space(&a, DIM_RANK_TOL).into_iter().map(|v| AlgebraElement(v.iter().copied().collect())).collect())
    }

    /// Dimension of the orbit through `x`.
    pub fn orbit_dim(&self, x: &[f64]) -> Result<usize> {
        Ok(self.group.dim() - self.isotropy_algebra(x)?.len())
    }

    /// `|⟨∇_u X*, v⟩ + ⟨∇_v X*, u⟩|`, zero for Killing fields.
    pub fn killing_residual(&self, xi: &AlgebraElement, x: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
        let (val, jac) = self.generator_jet(xi, x);
        let gam = christoffel(&self.manifold, x)?;
        let cov = |w: &[f64]| -> Vec<f64> {
            let d = jac.matvec(w);
            let c = gam.contract(w, &val);
            d.iter().zip(&c).map(|(a, b)| a + b).collect()
        };
        let m = &self.manifold;
        Ok((m.inner(x, &cov(u), v) + m.inner(x, &cov(v), u)).abs())
    }

    /// Largest `|g_{gx}(dφ u, dφ v) − g_x(u, v)|` over coordinate pairs.
    pub fn isometry_residual(&self, g: &GroupElement, x: &[f64]) -> f64 {
        let d = self.differential(g, x);
        let pulled = d.transpose().matmul(&self.manifold.metric(&self.act(g, x))).matmul(&d);
        pulled.sub(&self.manifold.metric(x)).max_abs()
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        self.manifold.check_chart(x)
    }
}
