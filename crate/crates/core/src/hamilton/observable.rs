//! Functions on `T*M` that can be evaluated on plain floats and on duals.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{ManifoldModel, MetricAt, MetricField};
use crate::liegroups::{ActAt, Action, ActionField, AlgebraElement};
use crate::numcore::dual::seed;
use crate::numcore::{Dual, MultiPoly, Real, D1};
use crate::sasaki::BundlePoint;

/// Expression tree of an observable in bundle coordinates `(x, ξ)`.
#[derive(Clone, Debug)]
pub enum Expr {
    /// Polynomial in the `2n` bundle coordinates.
    Poly(MultiPoly),
    Const(f64),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    /// `½ g^{ij}(x) ξ_i ξ_j`.
    Kinetic(ManifoldModel),
    /// `cos θ` in the sphere chart.
    Height,
    /// `u_X`.
    Moment(Action, AlgebraElement),
}

impl Expr {
    pub fn eval<S: Real>(&self, p: &[S]) -> Result<S>
    where
        dyn MetricField: MetricAt<S>,
        dyn ActionField: ActAt<Dual<S>>,
    {
        let n = p.len() / 2;
        Ok(match self {
            Expr::Poly(q) => {
                if q.vars().len() != p.len() {
                    return Err(Error::DimensionMismatch { expected: q.vars().len(), got: p.len() });
                }
                q.eval_real(p)
            }
            Expr::Const(c) => S::cst(*c),
            Expr::Sum(es) => {
                let mut acc = S::zero();
                for e in es {
                    acc = acc + e.eval(p)?;
                }
                acc
            }
            Expr::Product(es) => {
                let mut acc = S::one();
                for e in es {
                    acc = acc * e.eval(p)?;
                }
                acc
            }
            Expr::Sin(e) => e.eval(p)?.sin(),
            Expr::Cos(e) => e.eval(p)?.cos(),
            Expr::Exp(e) => e.eval(p)?.exp(),
            Expr::Kinetic(m) => {
                let g = m.metric(&p[..n]);
                let v = g.solve_vec(&p[n..])?;
                let mut acc = S::zero();
                for (a, b) in v.iter().zip(&p[n..]) {
                    acc = acc + a.clone() * b.clone();
                }
                acc.scale(0.5)
            }
            Expr::Height => p[0].cos(),
            Expr::Moment(action, x) => {
                let gen = action.generator_at(x, &p[..n]);
                let mut acc = S::zero();
                for (a, b) in gen.into_iter().zip(&p[n..]) {
                    acc = acc + a * b.clone();
                }
                acc
            }
        })
    }

    /// The exact polynomial this expression equals, when it is built only
    /// from polynomials, constants that are integers, sums and products.
    pub fn polynomial(&self) -> Option<MultiPoly> {
        match self {
            Expr::Poly(q) => Some(q.clone()),
            Expr::Sum(es) => {
                let ps: Option<Vec<MultiPoly>> = es.iter().map(Expr::polynomial).collect();
                let ps = ps?;
                let mut it = ps.into_iter();
                let first = it.next()?;
                it.try_fold(first, |a, b| a.try_add(&b).ok())
            }
            Expr::Product(es) => {
                let ps: Option<Vec<MultiPoly>> = es.iter().map(Expr::polynomial).collect();
                let ps = ps?;
                let mut it = ps.into_iter();
                let first = it.next()?;
                it.try_fold(first, |a, b| a.try_mul(&b).ok())
            }
            _ => None,
        }
    }
}

/// A named observable on `T*M`.
#[derive(Clone, Debug)]
pub struct ObservableFn {
    pub name: String,
    pub expr: Expr,
}

impl ObservableFn {
    pub fn new(name: &str, expr: Expr) -> Self {
        ObservableFn { name: name.to_string(), expr }
    }

    pub fn polynomial(name: &str, p: MultiPoly) -> Self {
        Self::new(name, Expr::Poly(p))
    }

    pub fn constant(c: f64) -> Self {
        Self::new(&format!("{c}"), Expr::Const(c))
    }

    pub fn kinetic(m: &ManifoldModel) -> Self {
        Self::new("kinetic", Expr::Kinetic(m.clone()))
    }

    pub fn height() -> Self {
        Self::new("height", Expr::Height)
    }

    pub fn moment(action: &Action, x: AlgebraElement) -> Self {
        Self::new("moment", Expr::Moment(action.clone(), x))
    }

    pub fn sum(&self, o: &ObservableFn) -> Self {
        Self::new(&format!("({} + {})", self.name, o.name), Expr::Sum(vec![self.expr.clone(), o.expr.clone()]))
    }

    pub fn product(&self, o: &ObservableFn) -> Self {
        Self::new(&format!("({} * {})", self.name, o.name), Expr::Product(vec![self.expr.clone(), o.expr.clone()]))
    }

    pub fn sin(&self) -> Self {
        Self::new(&format!("sin({})", self.name), Expr::Sin(Box::new(self.expr.clone())))
    }

    pub fn cos(&self) -> Self {
        Self::new(&format!("cos({})", self.name), Expr::Cos(Box::new(self.expr.clone())))
    }

    pub fn exp(&self) -> Self {
        Self::new(&format!("exp({})", self.name), Expr::Exp(Box::new(self.expr.clone())))
    }

    pub fn poly(&self) -> Option<MultiPoly> {
        self.expr.polynomial()
    }

    pub fn value(&self, bp: &BundlePoint) -> Result<f64> {
        self.expr.eval(&bp.coords())
    }

    /// `df` in bundle coordinates.
    pub fn differential(&self, bp: &BundlePoint) -> Result<Vec<f64>> {
        let p = bp.coords();
        let out: D1 = self.expr.eval(&seed(&p))?;
        if !out.all_finite() {
            return Err(Error::Domain(format!("non-finite differential of {} at {p:?}", self.name)));
        }
        Ok((0..p.len()).map(|i| out.partial(i)).collect())
    }
}

impl fmt::Display for ObservableFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
