//! Moving points and zero-level covectors into `Σ` and `T*Σ`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::structure::{PolarStructure, ON_SECTION_TOL};
use crate::error::{Error, Result};
use crate::geometry::submanifold::tangent_split;
use crate::geometry::ManifoldModel;
use crate::hamilton::{lift_point, moment_map};
use crate::liegroups::{AlgebraElement, GroupElement};
use crate::numcore::dual::{seed, values};
use crate::numcore::{sample_rng, D1, D2};
use crate::sasaki::{flat, sharp, BundlePoint};

/// `T*Σ` membership is accepted below this residual.
pub const COTANGENT_TOL: f64 = 1e-7;
/// Moment values below this count as zero.
pub const ZERO_LEVEL_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 10_000;
const SEARCH_STARTS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionMethod {
    ClosedForm,
    Search,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointProjection {
    pub element: GroupElement,
    pub point: Vec<f64>,
    pub section_param: Vec<f64>,
    pub residual: f64,
    pub method: ProjectionMethod,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovectorProjection {
    /// `h = h₂ h₁`.
    pub element: GroupElement,
    pub first: GroupElement,
    pub second: GroupElement,
    pub point: BundlePoint,
    pub section_param: Vec<f64>,
    pub fiber_param: Vec<f64>,
    pub residual: f64,
    pub method: ProjectionMethod,
}

/// `(P(s), (dP(s) a)^♭)`, the point of `T*Σ` with parameters `(s, a)`.
pub fn section_covector(ps: &PolarStructure, s: &[f64], a: &[f64]) -> BundlePoint {
    let m = ps.section.ambient();
    let x = ps.section.point(s);
    let t = ps.section.tangent_basis(s);
    let v: Vec<f64> = (0..x.len()).map(|i| t.iter().zip(a).map(|(ti, ai)| ti[i] * ai).sum()).collect();
    let xi = flat(m, &x, &v);
    BundlePoint::cotangent(x, xi)
}

/// Parameters `(s, a)` of the nearest point of `T*Σ` and the distance to it
/// (base distance and normal part of `ξ^♯`, whichever is larger).
pub fn locate_covector(ps: &PolarStructure, bp: &BundlePoint) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let m = ps.section.ambient();
    let s = ps.section.locate(&bp.base);
    let d = ps.section.distance(&bp.base);
    let jet = ps.section.jet(&s);
    let g = m.metric(&bp.base);
    let v = sharp(m, &bp.base, &bp.fiber);
    let (a, r) = tangent_split(&g, &jet.jacobian, &v)?;
    Ok((s, a, d.max(m.norm(&bp.base, &r))))
}

pub fn cotangent_section_residual(ps: &PolarStructure, bp: &BundlePoint) -> f64 {
    locate_covector(ps, bp).map(|(_, _, r)| r).unwrap_or(f64::INFINITY)
}

/// Coordinate tangent vectors of `T*Σ ⊂ T*M` at parameters `(s, a)`.
pub fn cotangent_section_tangents(ps: &PolarStructure, s: &[f64], a: &[f64]) -> Vec<Vec<f64>> {
    let k = s.len();
    let m = ps.section.ambient();
    let w: Vec<f64> = s.iter().chain(a).copied().collect();
    let wd: Vec<D1> = seed(&w);
    let sd: Vec<D2> = seed(&wd[..k]);
    let p = ps.section.point_at::<D2>(&sd);
    let x: Vec<D1> = values(&p);
    let n = x.len();
    let v: Vec<D1> = p.iter().map(|c| (0..k).fold(D1::constant(0.0), |acc, b| acc + c.partial(b) * wd[k + b].clone())).collect();
    let xi = m.metric::<D1>(&x).matvec(&v);
    let image: Vec<D1> = x.into_iter().chain(xi).collect();
    (0..2 * k).map(|c| (0..2 * n).map(|i| image[i].partial(c)).collect()).collect()
}

/// Chart distance between two cotangent points (base) plus the Euclidean
/// distance of their covectors.
pub fn bundle_distance(m: &ManifoldModel, p: &BundlePoint, q: &BundlePoint) -> f64 {
    m.coord_dist(&p.base, &q.base) + p.fiber.iter().zip(&q.fiber).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
}

/// Levenberg–Marquardt on a residual vector, Jacobian by central differences.
fn least_squares_descent(residual: &dyn Fn(&[f64]) -> Vec<f64>, c0: Vec<f64>, budget: &mut usize, tol: f64) -> (Vec<f64>, f64) {
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut c = c0;
    let mut r = residual(&c);
    let mut f = norm(&r);
    let mut lambda = 1e-3;
    let k = c.len();
    while f > tol && *budget > 0 {
        *budget -= 1;
        let h = 1e-7;
        let jac = DMatrix::from_fn(r.len(), k, |i, j| {
            let mut p = c.clone();
            let mut q = c.clone();
            p[j] += h;
            q[j] -= h;
            (residual(&p)[i] - residual(&q)[i]) / (2.0 * h)
        });
        let jt = jac.transpose();
        let rhs = -(&jt * DVector::from_column_slice(&r));
        let normal = &jt * &jac;
        let mut improved = false;
        for _ in 0..20 {
            let a = &normal + DMatrix::identity(k, k) * lambda;
            let Some(step) = a.lu().solve(&rhs) else { break };
            let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
            let rt = residual(&trial);
            let ft = norm(&rt);
            if ft < f {
                c = trial;
                r = rt;
                f = ft;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (c, f)
}

fn exp_coords(ps: &PolarStructure, basis: &[AlgebraElement], c: &[f64]) -> GroupElement {
    let k = ps.action.group.dim();
    let mut x = vec![0.0; k];
    for (b, cb) in basis.iter().zip(c) {
        for (xi, bi) in x.iter_mut().zip(&b.0) {
            *xi += cb * bi;
        }
    }
    GroupElement { matrix: ps.action.group.algebra_matrix(&x).exp() }
}

fn algebra_basis(ps: &PolarStructure) -> Vec<AlgebraElement> {
    let k = ps.action.group.dim();
    (0..k).map(|a| AlgebraElement::basis(k, a)).collect()
}

fn point_search(ps: &PolarStructure, x: &[f64]) -> Result<PointProjection> {
    let m = ps.section.ambient();
    let basis = algebra_basis(ps);
    let mut starts = vec![ps.action.group.identity()];
    starts.extend(ps.weyl_generators.iter().cloned());
    for j in 0..SEARCH_STARTS {
        starts.push(ps.action.group.haar_sample(&mut sample_rng(0x9e37, "projection-start", j)));
    }
    let mut budget = MAX_ITERATIONS;
    let mut best: Option<(GroupElement, f64)> = None;
    for g0 in starts {
        let residual = |c: &[f64]| {
            let y = ps.action.act(&exp_coords(ps, &basis, c).compose(&g0), x);
            m.coord_diff(&ps.section.point(&ps.section.locate(&y)), &y)
        };
        let (c, f) = least_squares_descent(&residual, vec![0.0; basis.len()], &mut budget, 1e-12);
        if best.as_ref().is_none_or(|(_, b)| f < *b) {
            best = Some((exp_coords(ps, &basis, &c).compose(&g0), f));
        }
        if f < 1e-12 || budget == 0 {
            break;
        }
    }
    let (element, residual) = best.expect("at least one start");
    if residual > ON_SECTION_TOL {
        return Err(Error::NonConvergence { iterations: MAX_ITERATIONS - budget, residual });
    }
    Ok(finish_point(ps, x, element, ProjectionMethod::Search))
}

fn finish_point(ps: &PolarStructure, x: &[f64], element: GroupElement, method: ProjectionMethod) -> PointProjection {
    let point = ps.action.act(&element, x);
    let section_param = ps.section.locate(&point);
    let residual = ps.section.distance(&point);
    PointProjection { element, point, section_param, residual, method }
}

/// `h₁` with `h₁·x ∈ Σ`: the closed form when available, else a search over the group.
pub fn project_point(ps: &PolarStructure, x: &[f64]) -> Result<PointProjection> {
    ps.action.check_point(x)?;
    if let Some(c) = &ps.canonicalize {
        if let Ok(h) = c(x) {
            let p = finish_point(ps, x, h, ProjectionMethod::ClosedForm);
            if p.residual <= ON_SECTION_TOL {
                return Ok(p);
            }
        }
    }
    point_search(ps, x)
}

fn slice_search(ps: &PolarStructure, bp: &BundlePoint) -> Result<GroupElement> {
    let x = &bp.base;
    let iso = ps.action.isotropy_algebra(x)?;
    let mut starts = vec![ps.action.group.identity()];
    for g in ps.weyl_generators.iter().chain(&ps.isotropy_candidates) {
        if ps.section.ambient().coord_dist(&ps.action.act(g, x), x) < ON_SECTION_TOL {
            starts.push(g.clone());
        }
    }
    for j in 0..SEARCH_STARTS {
        let mut rng = sample_rng(0x9e37, "slice-start", j);
        let c: Vec<f64> = (0..iso.len()).map(|_| rand::Rng::random_range(&mut rng, -3.0..3.0)).collect();
        starts.push(exp_coords(ps, &iso, &c));
    }
    let mut budget = MAX_ITERATIONS;
    let mut best: Option<(GroupElement, f64)> = None;
    let m = ps.section.ambient();
    let s = ps.section.locate(x);
    let jet = ps.section.jet(&s);
    for g0 in starts {
        let residual = |c: &[f64]| -> Vec<f64> {
            let h = exp_coords(ps, &iso, c).compose(&g0);
            match lift_point(&ps.action, &h, bp) {
                Ok(q) => {
                    let v = sharp(m, &q.base, &q.fiber);
                    let g = m.metric(&q.base);
                    tangent_split(&g, &jet.jacobian, &v).map(|(_, r)| r).unwrap_or_else(|_| vec![f64::INFINITY; v.len()])
                }
                Err(_) => vec![f64::INFINITY; x.len()],
            }
        };
        let (c, f) = least_squares_descent(&residual, vec![0.0; iso.len()], &mut budget, 1e-12);
        if best.as_ref().is_none_or(|(_, b)| f < *b) {
            best = Some((exp_coords(ps, &iso, &c).compose(&g0), f));
        }
        if f < 1e-12 || budget == 0 {
            break;
        }
    }
    let (h, f) = best.expect("at least one start");
    if f > COTANGENT_TOL {
        return Err(Error::NonConvergence { iterations: MAX_ITERATIONS - budget, residual: f });
    }
    Ok(h)
}

/// `h = h₂h₁` moving a point of `u⁻¹(0)` into `T*Σ`.
pub fn project_covector(ps: &PolarStructure, bp: &BundlePoint) -> Result<CovectorProjection> {
    let u = moment_map(&ps.action, bp)?;
    if u.norm() >= ZERO_LEVEL_TOL {
        return Err(Error::Precondition(format!("moment map is {:.3e}, not zero", u.norm())));
    }
    let p1 = project_point(ps, &bp.base)?;
    let mut method = p1.method;
    let bp1 = lift_point(&ps.action, &p1.element, bp)?;
    let (_, _, r1) = locate_covector(ps, &bp1)?;
    let second = if r1 <= COTANGENT_TOL {
        ps.action.group.identity()
    } else {
        let closed = ps.slice_canonicalize.as_ref().and_then(|c| {
            let m = ps.section.ambient();
            let h = c(&bp1.base, &sharp(m, &bp1.base, &bp1.fiber)).ok()?;
            let q = lift_point(&ps.action, &h, &bp1).ok()?;
            (cotangent_section_residual(ps, &q) <= COTANGENT_TOL).then_some(h)
        });
        match closed {
            Some(h) => h,
            None => {
                method = ProjectionMethod::Search;
                slice_search(ps, &bp1)?
            }
        }
    };
    let element = second.compose(&p1.element);
    let point = lift_point(&ps.action, &element, bp)?;
    let (section_param, fiber_param, residual) = locate_covector(ps, &point)?;
    if residual > COTANGENT_TOL {
        return Err(Error::NonConvergence { iterations: 0, residual });
    }
    Ok(CovectorProjection { element, first: p1.element, second, point, section_param, fiber_param, residual, method })
}
