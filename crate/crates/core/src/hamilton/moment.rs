//! Cotangent lift of an action, the moment map and its identities.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::liegroups::{Action, AlgebraElement, GroupElement};
use crate::numcore::dual::seed;
use crate::numcore::linalg::{null_space, DIM_RANK_TOL};
use crate::numcore::{dual_gradient, sample_rng, Dual, Mat, D1, D2};
use crate::sampling::SampledMax;
use crate::sasaki::{canonical_form, from_coords, BundleKind, BundlePoint, BundleTangent};

/// Element of `𝔤*` in the dual of the algebra basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub coefficients: Vec<f64>,
}

impl MomentValue {
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `u_X = ⟨u, X⟩`.
    pub fn pair(&self, x: &AlgebraElement) -> f64 {
        self.coefficients.iter().zip(&x.0).map(|(a, b)| a * b).sum()
    }
}

fn require_cotangent(bp: &BundlePoint) -> Result<()> {
    if bp.kind != BundleKind::Cotangent {
        return Err(Error::Precondition("expected a cotangent bundle point".into()));
    }
    Ok(())
}

/// `g · (x, ξ) = (g x, (dφ_g)^{-T} ξ)`.
pub fn lift_point(action: &Action, g: &GroupElement, bp: &BundlePoint) -> Result<BundlePoint> {
    require_cotangent(bp)?;
    let d = action.differential(g, &bp.base);
    let xi = d.transpose().solve_vec(&bp.fiber)?;
    Ok(BundlePoint::cotangent(action.act(g, &bp.base), xi))
}

/// Jacobian of the lifted map `(x, ξ) ↦ g·(x, ξ)` in bundle coordinates.
pub fn lifted_differential(action: &Action, g: &GroupElement, bp: &BundlePoint) -> Result<Mat<f64>> {
    require_cotangent(bp)?;
    let n = bp.dim();
    let p = seed(&bp.coords());
    let xs: Vec<D2> = seed(&p[..n]);
    let gm: Mat<D2> = g.matrix.map(|v| Dual::constant(D1::constant(*v)));
    let out = action.act_at(&gm, &xs);
    let d = Mat::from_fn(n, n, |i, j| out[i].partial(j));
    let fiber = d.transpose().solve_vec(&p[n..])?;
    let image: Vec<D1> = out.into_iter().map(|o| o.value).chain(fiber).collect();
    Ok(Mat::from_fn(2 * n, 2 * n, |i, j| image[i].partial(j)))
}

/// `u_a(x, ξ) = ⟨ξ, X_a*(x)⟩` for each basis element.
pub fn moment_map(action: &Action, bp: &BundlePoint) -> Result<MomentValue> {
    require_cotangent(bp)?;
    action.check_point(&bp.base)?;
    let coefficients = action.generators(&bp.base).iter().map(|v| v.iter().zip(&bp.fiber).map(|(a, b)| a * b).sum()).collect();
    Ok(MomentValue { coefficients })
}

/// `u_X` as a function of the bundle coordinates, over first-order duals.
pub fn moment_component(action: &Action, xi: &AlgebraElement, p: &[D1]) -> D1 {
    let n = p.len() / 2;
    let gen = action.generator_at(xi, &p[..n]);
    gen.into_iter().zip(&p[n..]).fold(D1::constant(0.0), |acc, (a, b)| acc + a * b.clone())
}

/// `X^# = Xⁱ ∂_{xⁱ} − (∂_i Xʲ) ξ_j ∂_{ξ_i}` in bundle coordinates.
pub fn cotangent_generator_coords(action: &Action, xi: &AlgebraElement, bp: &BundlePoint) -> Result<Vec<f64>> {
    require_cotangent(bp)?;
    action.check_point(&bp.base)?;
    let n = bp.dim();
    let (val, jac) = action.generator_jet(xi, &bp.base);
    let mut out = val;
    for i in 0..n {
        out.push(-(0..n).map(|j| jac[(j, i)] * bp.fiber[j]).sum::<f64>());
    }
    Ok(out)
}

pub fn cotangent_generator(action: &Action, xi: &AlgebraElement, bp: &BundlePoint) -> Result<BundleTangent> {
    let w = cotangent_generator_coords(action, xi, bp)?;
    from_coords(&action.manifold, bp, &w)
}

/// `d/dt|₀ exp(tX)·(x, ξ)` differentiated through the lifted action itself.
pub fn cotangent_generator_via_flow(action: &Action, xi: &AlgebraElement, bp: &BundlePoint) -> Result<Vec<f64>> {
    require_cotangent(bp)?;
    let n = bp.dim();
    let t = D1::var(0.0, 0, 1);
    let g: Mat<D1> = action.group.exp_at(xi, &t);
    let g2: Mat<D2> = g.map(|e| Dual::constant(e.clone()));
    let x2: Vec<D2> = seed(&bp.base.iter().map(|v| D1::constant(*v)).collect::<Vec<_>>());
    let out = action.act_at(&g2, &x2);
    let base: Vec<D1> = out.iter().map(|o| o.value.clone()).collect();
    let d = Mat::from_fn(n, n, |i, j| out[i].partial(j));
    let fiber = d.transpose().solve_vec(&bp.fiber.iter().map(|v| D1::constant(*v)).collect::<Vec<_>>())?;
    Ok(base.iter().chain(&fiber).map(|v| v.partial(0)).collect())
}

/// Draws `ξ` uniformly from the null space of `ξ ↦ (⟨ξ, X_a*(x)⟩)_a`.
pub fn zero_level_covector<R: Rng + ?Sized>(action: &Action, x: &[f64], rng: &mut R) -> Vec<f64> {
    let gens = action.generators(x);
    let n = x.len();
    let a = DMatrix::from_fn(gens.len(), n, |r, c| gens[r][c]);
    let basis = null_space(&a, DIM_RANK_TOL);
    let mut xi = vec![0.0; n];
    for b in &basis {
        let c: f64 = StandardNormal.sample(rng);
        for (e, bv) in xi.iter_mut().zip(b.iter()) {
            *e += c * bv;
        }
    }
    xi
}

/// Points of `u⁻¹(0)` over base points drawn by `sample_base`.
pub fn sample_zero_level(
    action: &Action,
    rng: &mut ChaCha8Rng,
    count: usize,
    sample_base: &dyn Fn(&mut ChaCha8Rng) -> Vec<f64>,
) -> Vec<BundlePoint> {
    (0..count)
        .map(|_| {
            let x = sample_base(rng);
            let xi = zero_level_covector(action, &x, rng);
            BundlePoint::cotangent(x, xi)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentIdentityReport {
    /// `max ‖du_X − i_{X^#}ω‖`.
    pub differential: SampledMax,
    /// `max ‖u(g·p) − Ad*_g u(p)‖`.
    pub equivariance: SampledMax,
}

/// Checks `du_X = i_{X^#}ω` and `u(g·p) = Ad*_g u(p)` at random points.
pub fn check_moment_identities(
    action: &Action,
    samples: usize,
    seed_value: u64,
    sample_base: &dyn Fn(&mut ChaCha8Rng) -> Vec<f64>,
) -> Result<MomentIdentityReport> {
    let k = action.group.dim();
    let n = action.dim();
    let mut differential = SampledMax::new();
    let mut equivariance = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed_value, "moment-identities", i as u64);
        let x = sample_base(&mut rng);
        let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let bp = BundlePoint::cotangent(x, xi);
        let p = bp.coords();
        let mut worst: f64 = 0.0;
        for a in 0..k {
            let e = AlgebraElement::basis(k, a);
            let du = dual_gradient(|q| moment_component(action, &e, q), &p)?;
            let xs = cotangent_generator_coords(action, &e, &bp)?;
            for (j, duj) in du.iter().enumerate() {
                let mut ej = vec![0.0; 2 * n];
                ej[j] = 1.0;
                worst = worst.max((duj - canonical_form(&xs, &ej)).abs());
            }
        }
        differential.observe(i, worst, || json!({ "point": bp }));

        let g = action.group.haar_sample(&mut rng);
        let moved = lift_point(action, &g, &bp)?;
        let lhs = moment_map(action, &moved)?;
        let rhs = action.group.coadjoint(&g, &moment_map(action, &bp)?.coefficients);
        let r = lhs.coefficients.iter().zip(&rhs).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        equivariance.observe(i, r, || json!({ "point": bp, "group_element": g }));
    }
    Ok(MomentIdentityReport { differential, equivariance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroups::ExampleId;

    #[test]
    fn planar_rotation_moment_and_generator() {
        let a = ExampleId::So2R2.action();
        let bp = BundlePoint::cotangent(vec![1.0, 0.0], vec![0.0, 1.0]);
        assert!((moment_map(&a, &bp).unwrap().coefficients[0] - 1.0).abs() < 1e-15);
        let x = cotangent_generator_coords(&a, &AlgebraElement(vec![1.0]), &bp).unwrap();
        let expected = [0.0, 1.0, -1.0, 0.0];
        assert!(x.iter().zip(expected).all(|(p, q)| (p - q).abs() < 1e-14), "{x:?}");
        let flow = cotangent_generator_via_flow(&a, &AlgebraElement(vec![1.0]), &bp).unwrap();
        assert!(flow.iter().zip(expected).all(|(p, q)| (p - q).abs() < 1e-12), "{flow:?}");
    }

    #[test]
    fn lifted_differential_matches_finite_differences() {
        let a = ExampleId::S1S2.action();
        let g = a.group.plane_rotation(0, 1, 0.7);
        let bp = BundlePoint::cotangent(vec![1.0, 0.3], vec![0.4, -0.9]);
        let d = lifted_differential(&a, &g, &bp).unwrap();
        let f = |c: &[f64]| lift_point(&a, &g, &BundlePoint::cotangent(c[..2].to_vec(), c[2..].to_vec())).unwrap().coords();
        let fd = crate::numcore::finite_diff_jacobian(f, &bp.coords(), 1e-6).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| (d[(i, j)] - fd[(i, j)]).abs() < 1e-7)));
    }

    #[test]
    fn zero_covector_has_zero_moment() {
        let a = ExampleId::So3Adj.action();
        let bp = BundlePoint::cotangent(vec![0.3, -1.0, 2.0], vec![0.0; 3]);
        assert_eq!(moment_map(&a, &bp).unwrap().norm(), 0.0);
    }

    #[test]
    fn planar_zero_level_is_radial() {
        let a = ExampleId::So2R2.action();
        let mut rng = sample_rng(5, "t", 0);
        let xi = zero_level_covector(&a, &[2.0, 1.0], &mut rng);
        assert!((2.0 * xi[1] - 1.0 * xi[0]).abs() < 1e-12);
        // a fixed point accepts every covector
        let free = zero_level_covector(&a, &[0.0, 0.0], &mut rng);
        assert!(free.iter().any(|c| c.abs() > 0.0));
    }
}
