//! Hamiltonian vector fields and Poisson brackets on `T*M`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use super::moment::{cotangent_generator_coords, lift_point};
use super::observable::ObservableFn;
use crate::error::{Error, Result};
use crate::geometry::ManifoldModel;
use crate::liegroups::{Action, AlgebraElement};
use crate::numcore::{sample_rng, MultiPoly};
use crate::sampling::SampledMax;
use crate::sasaki::{apply_j, canonical_form, from_coords, sasaki_gram, symplectic_gram, to_coords, BundlePoint, BundleTangent};

/// Solution of `i_X ω = df`, with the residual of the linear solve.
#[derive(Clone, Debug, Serialize)]
pub struct HamiltonianField {
    /// Components in bundle coordinates `(x, ξ)`.
    pub coords: Vec<f64>,
    pub tangent: BundleTangent,
    pub residual: f64,
}

/// Residual above which the solve is treated as a broken chart.
pub const SOLVE_TOL: f64 = 1e-9;

pub fn hamiltonian_field(m: &ManifoldModel, f: &ObservableFn, bp: &BundlePoint) -> Result<HamiltonianField> {
    let df = f.differential(bp)?;
    // Ω(X, e_j) = (Wᵀ X)_j
    let wt = symplectic_gram(m, bp)?.transpose();
    let coords = wt.solve_vec(&df)?;
    let back = wt.matvec(&coords);
    let scale = 1.0 + df.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let residual = back.iter().zip(&df).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
    if residual > SOLVE_TOL * scale {
        return Err(Error::Singular(format!("symplectic solve residual {residual:e} at {:?}", bp.base)));
    }
    let tangent = from_coords(m, bp, &coords)?;
    Ok(HamiltonianField { coords, tangent, residual })
}

/// `−J grad f`, with the gradient taken in the Sasaki metric.
pub fn j_gradient_field(m: &ManifoldModel, f: &ObservableFn, bp: &BundlePoint) -> Result<Vec<f64>> {
    let df = f.differential(bp)?;
    let grad = sasaki_gram(m, bp)?.solve_vec(&df)?;
    let z = apply_j(&from_coords(m, bp, &grad)?).scaled(-1.0);
    to_coords(m, bp, &z)
}

/// `{f, g} = ω(X_f, X_g)`.
pub fn poisson_bracket(m: &ManifoldModel, f: &ObservableFn, g: &ObservableFn, bp: &BundlePoint) -> Result<f64> {
    let xf = hamiltonian_field(m, f, bp)?;
    let xg = hamiltonian_field(m, g, bp)?;
    Ok(canonical_form(&xf.coords, &xg.coords))
}

/// Exact bracket of polynomials in canonical coordinates `(x₁..x_n, ξ₁..ξ_n)`:
/// `Σ ∂_{x_i}f ∂_{ξ_i}g − ∂_{ξ_i}f ∂_{x_i}g`.
pub fn poly_bracket(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    let nv = f.vars().len();
    if !nv.is_multiple_of(2) || g.vars() != f.vars() {
        return Err(Error::VariableMismatch { left: f.vars().to_vec(), right: g.vars().to_vec() });
    }
    let n = nv / 2;
    let mut acc = MultiPoly::zero(f.vars());
    for i in 0..n {
        let a = f.derivative(i).try_mul(&g.derivative(n + i))?;
        let b = f.derivative(n + i).try_mul(&g.derivative(i))?;
        acc = acc.try_add(&a)?.try_sub(&b)?;
    }
    Ok(acc)
}

/// `max |f(g·p) − f(p)|` over random points and group elements.
pub fn invariance_residual(
    action: &Action,
    f: &ObservableFn,
    samples: usize,
    seed_value: u64,
    sample_base: &dyn Fn(&mut ChaCha8Rng) -> Vec<f64>,
) -> Result<SampledMax> {
    let n = action.dim();
    let mut acc = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed_value, "invariance", i as u64);
        let x = sample_base(&mut rng);
        let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let bp = BundlePoint::cotangent(x, xi);
        let g = action.group.haar_sample(&mut rng);
        let r = (f.value(&lift_point(action, &g, &bp)?)? - f.value(&bp)?).abs();
        acc.observe(i, r, || json!({ "point": bp, "group_element": g }));
    }
    Ok(acc)
}

/// `max |df(X^#)|` over random points and random algebra elements.
pub fn generator_derivative_residual(
    action: &Action,
    f: &ObservableFn,
    samples: usize,
    seed_value: u64,
    sample_base: &dyn Fn(&mut ChaCha8Rng) -> Vec<f64>,
) -> Result<SampledMax> {
    let n = action.dim();
    let k = action.group.dim();
    let mut acc = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed_value, "generator-derivative", i as u64);
        let x = sample_base(&mut rng);
        let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let bp = BundlePoint::cotangent(x, xi);
        let e = AlgebraElement((0..k).map(|_| rng.random_range(-1.0..1.0)).collect());
        let xs = cotangent_generator_coords(action, &e, &bp)?;
        let df = f.differential(&bp)?;
        let r = df.iter().zip(&xs).map(|(a, b)| a * b).sum::<f64>().abs();
        acc.observe(i, r, || json!({ "point": bp, "algebra_element": e.0 }));
    }
    Ok(acc)
}
