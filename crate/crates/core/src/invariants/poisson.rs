//! Restriction of invariant functions from `T*M` to `T*Σ` preserves brackets.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use super::basis::curated_basis;
use super::restrict::{cotangent_form, restrict_cotangent, LinearSection};
use crate::error::Result;
use crate::hamilton::{invariance_residual, poisson_bracket, poly_bracket, ObservableFn};
use crate::liegroups::{AlgebraElement, ExampleId};
use crate::numcore::dual::{seed, values};
use crate::numcore::{sample_rng, Mat, D1, D2};
use crate::polar::PolarStructure;
use crate::sampling::SampledMax;
use crate::sasaki::BundlePoint;

/// Invariance required of each observable before its bracket is compared.
pub const INVARIANCE_TOL: f64 = 1e-8;
const INVARIANCE_SAMPLES: usize = 20;

/// Point of `T*Σ` with canonical coordinates `(s, η)`: `(P(s), g dP h⁻¹ η)`.
pub fn cotangent_point(ps: &PolarStructure, s: &[f64], eta: &[f64]) -> Result<BundlePoint> {
    let m = ps.section.ambient();
    let x = ps.section.point(s);
    let jac = ps.section.jet(s).jacobian;
    let g = m.metric(&x);
    let h = jac.transpose().matmul(&g).matmul(&jac);
    let a = h.solve_vec(eta)?;
    let xi = g.matvec(&jac.matvec(&a));
    Ok(BundlePoint::cotangent(x, xi))
}

/// `f` restricted to `T*Σ` at canonical coordinates `w = (s, η)`, carried
/// through first-order duals.
fn restricted_value(ps: &PolarStructure, f: &ObservableFn, w: &[D1]) -> Result<D1> {
    let m = ps.section.ambient();
    let k = w.len() / 2;
    let sd: Vec<D2> = seed(&w[..k]);
    let p = ps.section.point_at::<D2>(&sd);
    let x: Vec<D1> = values(&p);
    let jac = Mat::from_fn(x.len(), k, |i, b| p[i].partial(b));
    let g: Mat<D1> = m.metric(&x);
    let h = jac.transpose().matmul(&g).matmul(&jac);
    let a = h.solve_vec(&w[k..])?;
    let xi = g.matvec(&jac.matvec(&a));
    let coords: Vec<D1> = x.into_iter().chain(xi).collect();
    f.expr.eval(&coords)
}

/// Canonical bracket on `T*Σ` of the restrictions of `f1` and `f2`.
pub fn section_bracket(ps: &PolarStructure, f1: &ObservableFn, f2: &ObservableFn, s: &[f64], eta: &[f64]) -> Result<f64> {
    let k = s.len();
    let w: Vec<f64> = s.iter().chain(eta).copied().collect();
    let wd = seed(&w);
    let d1 = restricted_value(ps, f1, &wd)?;
    let d2 = restricted_value(ps, f2, &wd)?;
    Ok((0..k).map(|b| d1.partial(b) * d2.partial(k + b) - d1.partial(k + b) * d2.partial(b)).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub first: String,
    pub second: String,
    /// Larger sampled invariance residual of the two observables.
    pub invariance: f64,
    pub invariant: bool,
    /// `|{F₁,F₂}_{T*M} − {F₁|,F₂|}_{T*Σ}|` at sampled points of `T*Σ`.
    pub residual: SampledMax,
    /// Exact symbolic comparison, when both observables are polynomials on a
    /// linear section.
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonRestrictionReport {
    pub pairs: Vec<PairReport>,
    pub max_residual: f64,
    pub max_invariance: f64,
    pub exact_compared: usize,
    pub exact_all: bool,
}

impl PoissonRestrictionReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual < tol && self.exact_all && self.pairs.iter().all(|p| p.invariant)
    }
}

fn exact_comparison(ps: &PolarStructure, f1: &ObservableFn, f2: &ObservableFn) -> Result<Option<bool>> {
    let (Some(p1), Some(p2)) = (f1.poly(), f2.poly()) else { return Ok(None) };
    if LinearSection::of(ps).is_err() {
        return Ok(None);
    }
    let lhs = restrict_cotangent(ps, &poly_bracket(&p1, &p2)?)?;
    let rhs = poly_bracket(&restrict_cotangent(ps, &p1)?, &restrict_cotangent(ps, &p2)?)?;
    Ok(Some(lhs == rhs))
}

/// Compares ambient and section brackets of invariant observables at sampled
/// points of `T*Σ` away from singular strata, and symbolically where possible.
pub fn check_poisson_restriction(
    ps: &PolarStructure,
    pairs: &[(ObservableFn, ObservableFn)],
    samples: usize,
    seed_value: u64,
) -> Result<PoissonRestrictionReport> {
    let m = ps.section.ambient();
    let k = ps.section.dim();
    let mut out = Vec::with_capacity(pairs.len());
    for (f1, f2) in pairs {
        let inv = |f: &ObservableFn| invariance_residual(&ps.action, f, INVARIANCE_SAMPLES, seed_value, ps.base_sampler()).map(|r| r.max);
        let invariance = inv(f1)?.max(inv(f2)?);
        let mut residual = SampledMax::new();
        for i in 0..samples {
            let mut rng = sample_rng(seed_value, "poisson-restriction", i as u64);
            let s = ps.sample_section_param(&mut rng);
            let eta: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            let bp = cotangent_point(ps, &s, &eta)?;
            let ambient = poisson_bracket(m, f1, f2, &bp)?;
            let section = section_bracket(ps, f1, f2, &s, &eta)?;
            residual.observe(
                i,
                (ambient - section).abs(),
                || json!({ "section_param": s, "eta": eta, "ambient": ambient, "section": section }),
            );
        }
        let exact = exact_comparison(ps, f1, f2)?;
        out.push(PairReport {
            first: f1.name.clone(),
            second: f2.name.clone(),
            invariance,
            invariant: invariance < INVARIANCE_TOL,
            residual,
            exact,
        });
    }
    Ok(PoissonRestrictionReport {
        max_residual: out.iter().map(|p| p.residual.max).fold(0.0, f64::max),
        max_invariance: out.iter().map(|p| p.invariance).fold(0.0, f64::max),
        exact_compared: out.iter().filter(|p| p.exact.is_some()).count(),
        exact_all: out.iter().all(|p| p.exact != Some(false)),
        pairs: out,
    })
}

/// Built-in invariant pairs: all pairs of curated generators (read on `T*M`)
/// plus a constant on flat examples; height, kinetic energy and the moment
/// map combined on the sphere.
pub fn default_pairs(example: ExampleId, ps: &PolarStructure) -> Result<Vec<(ObservableFn, ObservableFn)>> {
    if example == ExampleId::S1S2 {
        let h = ObservableFn::height();
        let kin = ObservableFn::kinetic(ps.section.ambient());
        let u = ObservableFn::moment(&ps.action, AlgebraElement::basis(1, 0));
        return Ok(vec![
            (h.clone(), kin.clone()),
            (h.product(&h), kin.clone()),
            (h.product(&kin), kin.clone()),
            (h.sin(), kin.product(&h).exp()),
            (u, kin.clone()),
            (h, ObservableFn::constant(2.0)),
        ]);
    }
    let basis = curated_basis(example, 2)?;
    let obs: Vec<ObservableFn> = basis
        .names
        .iter()
        .zip(&basis.generators)
        .map(|(n, g)| Ok(ObservableFn::polynomial(n, cotangent_form(ps, g)?)))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for i in 0..obs.len() {
        for j in i + 1..obs.len() {
            pairs.push((obs[i].clone(), obs[j].clone()));
        }
    }
    pairs.push((obs[0].clone(), ObservableFn::constant(1.0)));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::restrict::section_cotangent_vars;
    use crate::numcore::MultiPoly;
    use crate::polar::polar_structure;

    #[test]
    fn planar_mixed_bracket() {
        let id = ExampleId::So2R2;
        let ps = polar_structure(id);
        let b = curated_basis(id, 2).unwrap();
        let xp = ObservableFn::polynomial("x.p", b.generator("x.p").unwrap().clone());
        let xx = ObservableFn::polynomial("x.x", b.generator("x.x").unwrap().clone());
        let bracket = poly_bracket(&xp.poly().unwrap(), &xx.poly().unwrap()).unwrap();
        assert_eq!(bracket, xx.poly().unwrap().scale(&crate::numcore::poly::int(-2)));
        let v = section_cotangent_vars(1);
        assert_eq!(restrict_cotangent(&ps, &bracket).unwrap(), MultiPoly::parse_sparse(&v, "-2@2,0").unwrap());
        let r = check_poisson_restriction(&ps, &[(xp, xx)], 20, 3).unwrap();
        assert_eq!(r.pairs[0].exact, Some(true));
        assert!(r.max_residual < 1e-10);
    }

    #[test]
    fn all_flat_defaults_agree() {
        for id in [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)] {
            let ps = polar_structure(id);
            let r = check_poisson_restriction(&ps, &default_pairs(id, &ps).unwrap(), 10, 11).unwrap();
            assert!(r.passed(1e-6), "{id}: {r:?}");
            assert!(r.exact_compared + 1 == r.pairs.len());
        }
    }

    #[test]
    fn non_invariant_pair_is_caught() {
        // x2 vanishes on the section, so its restricted bracket with p2 is 0, not 1
        let ps = polar_structure(ExampleId::So2R2);
        let v = crate::invariants::ambient_vars(2, 2).unwrap();
        let f = ObservableFn::polynomial("x2", MultiPoly::var(&v, 1));
        let g = ObservableFn::polynomial("p2", MultiPoly::var(&v, 3));
        let r = check_poisson_restriction(&ps, &[(f, g)], 5, 1).unwrap();
        assert!(!r.pairs[0].invariant);
        assert_eq!(r.pairs[0].exact, Some(false));
        assert!((r.max_residual - 1.0).abs() < 1e-12);
        assert!(!r.passed(1e-6));
    }

    #[test]
    fn sphere_defaults_agree() {
        let ps = polar_structure(ExampleId::S1S2);
        let r = check_poisson_restriction(&ps, &default_pairs(ExampleId::S1S2, &ps).unwrap(), 30, 2).unwrap();
        assert!(r.passed(1e-6), "{r:?}");
        assert_eq!(r.exact_compared, 0);
    }
}
