//! Slice and symplectic slice representations along `Σ` and `T*Σ`.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use super::projection::{cotangent_section_tangents, locate_covector, COTANGENT_TOL};
use super::structure::PolarStructure;
use crate::error::{Error, Result};
use crate::hamilton::{cotangent_generator_coords, lift_point, lifted_differential};
use crate::liegroups::{AlgebraElement, GroupElement};
use crate::numcore::linalg::{
    max_cross_inner, null_space, numerical_rank, orthogonal_complement, orthonormal_span, span_residual, DIM_RANK_TOL,
};
use crate::numcore::{sample_rng, Mat};
use crate::sampling::SampledMax;
use crate::sasaki::{apply_j, from_coords, sasaki_gram, sharp, to_coords, BundlePoint, BundleTangent};

/// Orthogonality and containment checks on the splittings.
pub const SPLIT_TOL: f64 = 1e-8;
/// Mutual containment of `Φ(V)` and `W ⊕ W`.
pub const CONTAINMENT_TOL: f64 = 1e-7;

fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m[(i, j)])
}

fn unit(v: &DVector<f64>, g: &DMatrix<f64>) -> DVector<f64> {
    let n = (v.transpose() * g * v)[(0, 0)].max(0.0).sqrt();
    if n > 0.0 {
        v / n
    } else {
        v.clone()
    }
}

/// The isotropy representation of `G_x` on `T_xM`, linearized: `v ↦ ∂X*(x)·v`.
fn isotropy_matrix(ps: &PolarStructure, k: &AlgebraElement, x: &[f64]) -> Mat<f64> {
    ps.action.generator_jet(k, x).1
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceRep {
    pub base_point: Vec<f64>,
    pub isotropy_basis: Vec<AlgebraElement>,
    /// `g`-orthonormal basis of `T_x(G·x)^⊥`.
    pub normal_frame: Vec<Vec<f64>>,
    /// Tangent vectors of `Σ` in `normal_frame` coordinates.
    pub section_trace: Vec<Vec<f64>>,
    /// Largest `|g(n, X*)|` over normal frame vectors and generators.
    pub orbit_orthogonality: f64,
    /// Largest part of a (unit) tangent vector of `Σ` outside the normal frame.
    pub trace_residual: f64,
}

pub fn slice_representation(ps: &PolarStructure, x: &[f64]) -> Result<SliceRep> {
    let m = ps.section.ambient();
    let g = to_dmatrix(&m.metric(x));
    let gens: Vec<DVector<f64>> = ps.action.generators(x).iter().map(|v| dvec(v)).collect();
    let normal = orthogonal_complement(&gens, &g, DIM_RANK_TOL)?;
    let s = ps.section.locate(x);
    let tangents: Vec<DVector<f64>> = ps.section.tangent_basis(&s).iter().map(|t| unit(&dvec(t), &g)).collect();
    let section_trace = tangents.iter().map(|t| normal.iter().map(|nv| (nv.transpose() * &g * t)[(0, 0)]).collect()).collect();
    let trace_residual = tangents.iter().map(|t| span_residual(t, &normal, &g)).fold(0.0, f64::max);
    Ok(SliceRep {
        base_point: x.to_vec(),
        isotropy_basis: ps.action.isotropy_algebra(x)?,
        orbit_orthogonality: max_cross_inner(&normal, &gens, &g),
        normal_frame: normal.iter().map(|v| v.iter().copied().collect()).collect(),
        section_trace,
        trace_residual,
    })
}

/// At points of `Σ`, orbit directions of the slice representation through
/// vectors of `T_xΣ` are orthogonal to `T_xΣ`.
pub fn slice_polarity(ps: &PolarStructure, samples: usize, seed: u64) -> Result<SampledMax> {
    let m = ps.section.ambient();
    let mut acc = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, "slice-polarity", i as u64);
        let s = ps.sample_section_param(&mut rng);
        let x = ps.section.point(&s);
        let tangents = ps.section.tangent_basis(&s);
        let k = tangents.len();
        let c: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let v: Vec<f64> = (0..x.len()).map(|r| tangents.iter().zip(&c).map(|(t, cc)| t[r] * cc).sum()).collect();
        let vn = m.norm(&x, &v);
        let mut worst: f64 = 0.0;
        for iso in ps.action.isotropy_algebra(&x)? {
            let w = isotropy_matrix(ps, &iso, &x).matvec(&v);
            for t in &tangents {
                worst = worst.max(m.inner(&x, &w, t).abs() / (vn * m.norm(&x, t)));
            }
        }
        acc.observe(i, worst, || json!({ "section_param": s, "vector": v }));
    }
    Ok(acc)
}

/// Sasaki-orthonormal bases of `T(G·p)`, `J T(G·p)` and `T(T*Σ)` at `p`.
struct Splitting {
    gram: DMatrix<f64>,
    orbit_raw: Vec<DVector<f64>>,
    j_orbit_raw: Vec<DVector<f64>>,
    orbit: Vec<DVector<f64>>,
    j_orbit: Vec<DVector<f64>>,
    tsigma: Vec<DVector<f64>>,
}

fn splitting(ps: &PolarStructure, bp: &BundlePoint) -> Result<Splitting> {
    let m = ps.section.ambient();
    let (s, a, r) = locate_covector(ps, bp)?;
    if r > COTANGENT_TOL {
        return Err(Error::Precondition(format!("point is {r:.3e} away from T*{}", ps.section.name())));
    }
    let gram = to_dmatrix(&sasaki_gram(m, bp)?);
    let kdim = ps.action.group.dim();
    let mut orbit_raw = Vec::new();
    let mut j_orbit_raw = Vec::new();
    for c in 0..kdim {
        let w = cotangent_generator_coords(&ps.action, &AlgebraElement::basis(kdim, c), bp)?;
        let jw = to_coords(m, bp, &apply_j(&from_coords(m, bp, &w)?))?;
        orbit_raw.push(dvec(&w));
        j_orbit_raw.push(dvec(&jw));
    }
    let tangents: Vec<DVector<f64>> = cotangent_section_tangents(ps, &s, &a).iter().map(|t| dvec(t)).collect();
    Ok(Splitting {
        orbit: orthonormal_span(&orbit_raw, &gram, DIM_RANK_TOL)?,
        j_orbit: orthonormal_span(&j_orbit_raw, &gram, DIM_RANK_TOL)?,
        tsigma: orthonormal_span(&tangents, &gram, DIM_RANK_TOL)?,
        gram,
        orbit_raw,
        j_orbit_raw,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticSliceReport {
    /// Sasaki-orthonormal basis of `V` in bundle coordinates.
    pub v_basis: Vec<Vec<f64>>,
    /// `g`-orthonormal basis of `W = (G_x ξ^♯)^⊥ ∩ T_x(G·x)^⊥`.
    pub w_basis: Vec<Vec<f64>>,
    pub orbit_dim: usize,
    pub base_orbit_dim: usize,
    pub dim_v: usize,
    pub dim_w: usize,
    /// `max |g̃(J X₁^#, X₂^#)|` over unit generators.
    pub j_orbit_orthogonality: f64,
    /// `max |g̃(X^#, Y)|, |g̃(J X^#, Y)|` for unit `Y ∈ T(T*Σ)`.
    pub tsigma_orthogonality: f64,
    /// Largest part of a unit vector of `T(T*Σ)` outside `V`.
    pub tsigma_in_v: f64,
    pub phi_v_in_ww: f64,
    pub ww_in_phi_v: f64,
}

/// `V`, `W` and the identification `Φ(V) = W ⊕ W` at a point of `T*Σ`.
pub fn symplectic_slice(ps: &PolarStructure, bp: &BundlePoint) -> Result<SymplecticSliceReport> {
    let m = ps.section.ambient();
    let n = bp.dim();
    let sp = splitting(ps, bp)?;
    let both: Vec<DVector<f64>> = sp.orbit_raw.iter().chain(&sp.j_orbit_raw).cloned().collect();
    let v_basis = orthogonal_complement(&both, &sp.gram, DIM_RANK_TOL)?;
    let orbit_dim = sp.orbit.len();
    let rank_both = orthonormal_span(&both, &sp.gram, DIM_RANK_TOL)?.len();
    if rank_both != 2 * orbit_dim {
        return Err(Error::Violation(format!("T(G·p) + J T(G·p) has rank {rank_both}, expected {}", 2 * orbit_dim)));
    }

    let x = &bp.base;
    let g = to_dmatrix(&m.metric(x));
    let gens: Vec<DVector<f64>> = ps.action.generators(x).iter().map(|v| dvec(v)).collect();
    let base_orbit_dim = numerical_rank(&DMatrix::from_columns(&gens), DIM_RANK_TOL);
    let xi_sharp = sharp(m, x, &bp.fiber);
    let mut excluded = gens.clone();
    for k in ps.action.isotropy_algebra(x)? {
        excluded.push(dvec(&isotropy_matrix(ps, &k, x).matvec(&xi_sharp)));
    }
    let w_basis = orthogonal_complement(&excluded, &g, DIM_RANK_TOL)?;
    let (dim_v, dim_w) = (v_basis.len(), w_basis.len());
    if dim_v != 2 * dim_w || dim_v != 2 * (n - orbit_dim) {
        return Err(Error::Violation(format!("dim V = {dim_v}, dim W = {dim_w}, dim G·p = {orbit_dim}, dim M = {n}")));
    }

    let eye = DMatrix::identity(2 * n, 2 * n);
    let phi_v: Vec<DVector<f64>> =
        v_basis.iter().map(|v| from_coords(m, bp, v.as_slice()).map(|z| dvec(&z.stacked()))).collect::<Result<_>>()?;
    let phi_v = orthonormal_span(&phi_v, &eye, DIM_RANK_TOL)?;
    let mut ww = Vec::new();
    for w in &w_basis {
        let mut top = DVector::zeros(2 * n);
        let mut bottom = DVector::zeros(2 * n);
        for i in 0..n {
            top[i] = w[i];
            bottom[n + i] = w[i];
        }
        ww.push(top);
        ww.push(bottom);
    }
    let ww = orthonormal_span(&ww, &eye, DIM_RANK_TOL)?;
    let containment = |a: &[DVector<f64>], b: &[DVector<f64>]| a.iter().map(|v| span_residual(v, b, &eye)).fold(0.0, f64::max);

    let unit_orbit: Vec<DVector<f64>> = sp.orbit_raw.iter().filter(|v| v.norm() > 1e-12).map(|v| unit(v, &sp.gram)).collect();
    let unit_j: Vec<DVector<f64>> = sp.j_orbit_raw.iter().filter(|v| v.norm() > 1e-12).map(|v| unit(v, &sp.gram)).collect();
    Ok(SymplecticSliceReport {
        j_orbit_orthogonality: max_cross_inner(&unit_j, &unit_orbit, &sp.gram),
        tsigma_orthogonality: max_cross_inner(&unit_orbit, &sp.tsigma, &sp.gram).max(max_cross_inner(&unit_j, &sp.tsigma, &sp.gram)),
        tsigma_in_v: sp.tsigma.iter().map(|t| span_residual(t, &v_basis, &sp.gram)).fold(0.0, f64::max),
        phi_v_in_ww: containment(&phi_v, &ww),
        ww_in_phi_v: containment(&ww, &phi_v),
        v_basis: v_basis.iter().map(|v| v.iter().copied().collect()).collect(),
        w_basis: w_basis.iter().map(|v| v.iter().copied().collect()).collect(),
        orbit_dim,
        base_orbit_dim,
        dim_v,
        dim_w,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub stabilizer_dim: usize,
    pub identity_component_samples: usize,
    pub finite_elements_tested: usize,
    /// `max ‖Φ(dh·Z) − (h ⊕ h)Φ(Z)‖` over tested `h` and unit `Z ∈ V`.
    pub residual: f64,
    /// Largest displacement of the base point by a tested element.
    pub fixing_residual: f64,
}

/// Checks that the stabilizer of `p` acts on `V` diagonally through `Φ`,
/// on sampled elements of its identity component and on those candidate
/// elements of `G` that fix `p`.
pub fn check_slice_diagram(ps: &PolarStructure, bp: &BundlePoint, samples: usize, seed: u64) -> Result<DiagramReport> {
    let m = ps.section.ambient();
    let report = symplectic_slice(ps, bp)?;
    let n = bp.dim();
    let kdim = ps.action.group.dim();
    let gens: Vec<Vec<f64>> =
        (0..kdim).map(|c| cotangent_generator_coords(&ps.action, &AlgebraElement::basis(kdim, c), bp)).collect::<Result<_>>()?;
    let a = DMatrix::from_fn(2 * n, kdim, |i, j| gens[j][i]);
    let stab: Vec<DVector<f64>> = if kdim == 0 { Vec::new() } else { null_space(&a, DIM_RANK_TOL) };

    let mut elements: Vec<GroupElement> = Vec::new();
    let count = if stab.is_empty() { 0 } else { samples };
    for i in 0..count {
        let mut rng = sample_rng(seed, "slice-diagram", i as u64);
        let mut c = vec![0.0; kdim];
        for b in &stab {
            let t: f64 = StandardNormal.sample(&mut rng);
            for (ci, bi) in c.iter_mut().zip(b.iter()) {
                *ci += 2.0 * t * bi;
            }
        }
        elements.push(GroupElement { matrix: ps.action.group.algebra_matrix(&c).exp() });
    }
    let identity_component_samples = elements.len();
    let mut finite = 0;
    let mut candidates: Vec<GroupElement> = ps.weyl_generators.clone();
    candidates.extend(ps.isotropy_candidates.iter().cloned());
    for c in candidates {
        let q = lift_point(&ps.action, &c, bp)?;
        if super::projection::bundle_distance(m, &q, bp) < 1e-9 {
            elements.push(c);
            finite += 1;
        }
    }

    let mut residual: f64 = 0.0;
    let mut fixing_residual: f64 = 0.0;
    for h in &elements {
        fixing_residual = fixing_residual.max(super::projection::bundle_distance(m, &lift_point(&ps.action, h, bp)?, bp));
        let dl = lifted_differential(&ps.action, h, bp)?;
        let dphi = ps.action.differential(h, &bp.base);
        for v in &report.v_basis {
            let z = from_coords(m, bp, v)?;
            let lhs = from_coords(m, bp, &dl.matvec(v))?;
            let rhs = BundleTangent::new(dphi.matvec(&z.horizontal), dphi.matvec(&z.vertical));
            let d = lhs.stacked().iter().zip(rhs.stacked()).fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
            residual = residual.max(d);
        }
    }
    Ok(DiagramReport { stabilizer_dim: stab.len(), identity_component_samples, finite_elements_tested: finite, residual, fixing_residual })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalSplittingReport {
    pub orbit_dim: usize,
    pub j_orbit_dim: usize,
    pub tsigma_dim: usize,
    pub total: usize,
    pub expected: usize,
    /// Largest off-block entry of the Sasaki Gram matrix of the union of the three bases.
    pub max_cross_inner: f64,
}

/// `T(T*M) = T(G·p) ⊕ J T(G·p) ⊕ T(T*Σ̊)` at a principal point of `T*Σ`.
pub fn principal_splitting(ps: &PolarStructure, bp: &BundlePoint) -> Result<PrincipalSplittingReport> {
    let found = ps.action.isotropy_algebra(&bp.base)?.len();
    if found != ps.principal_isotropy_dim {
        return Err(Error::NonPrincipal { found, principal: ps.principal_isotropy_dim });
    }
    let sp = splitting(ps, bp)?;
    let cross = max_cross_inner(&sp.orbit, &sp.j_orbit, &sp.gram)
        .max(max_cross_inner(&sp.orbit, &sp.tsigma, &sp.gram))
        .max(max_cross_inner(&sp.j_orbit, &sp.tsigma, &sp.gram));
    let (a, b, c) = (sp.orbit.len(), sp.j_orbit.len(), sp.tsigma.len());
    Ok(PrincipalSplittingReport {
        orbit_dim: a,
        j_orbit_dim: b,
        tsigma_dim: c,
        total: a + b + c,
        expected: 2 * bp.dim(),
        max_cross_inner: cross,
    })
}
