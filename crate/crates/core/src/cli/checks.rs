//! One runner per check name. Each returns raw numbers; status is decided by
//! the caller against the configured tolerance.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::config::CheckName;
use crate::error::{Error, Result};
use crate::hamilton::{check_moment_identities, moment_map, sample_zero_level};
use crate::invariants::{
    certify_surjectivity, check_poisson_restriction, curated_basis, default_pairs, extend_invariant, reduced_algebra_compare,
    weyl_invariants,
};
use crate::liegroups::ExampleId;
use crate::numcore::sample_rng;
use crate::polar::{
    check_slice_diagram, check_tsigma_totally_geodesic, compute_weyl_group, principal_splitting, project_covector, section_covector,
    symplectic_slice, verify_section, weyl_orbit_intersection, PolarStructure,
};
use crate::sampling::{SampledMax, Worst};
use crate::sasaki::BundlePoint;

/// Stabilizer elements per slice point, and translates per orbit.
const DIAGRAM_ELEMENTS: usize = 5;
const ORBIT_TRANSLATES: usize = 10;
/// Floor on evaluations per bracket pair.
const MIN_PAIR_SAMPLES: usize = 10;
const MAX_CERTIFIED_DEGREE: u32 = 4;
/// Residual reported when a structural requirement (a dimension, an exact
/// equality) fails rather than a tolerance.
const STRUCTURAL_FAILURE: f64 = f64::INFINITY;

/// What a runner measured.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub max_residual: f64,
    pub sample_count: usize,
    pub worst: Option<Worst>,
    /// Samples that could not be evaluated and were left out.
    pub skipped: usize,
    pub details: Value,
}

impl Outcome {
    fn from_sampled(m: SampledMax, skipped: usize, details: Value) -> Self {
        Outcome { max_residual: m.max, sample_count: m.count, worst: m.worst, skipped, details }
    }
}

/// Generic point of `T*Σ`: principal section parameter, random fiber parameter.
fn sample_tsigma(ps: &PolarStructure, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>, BundlePoint) {
    let s = ps.sample_section_param(rng);
    let a: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.5..1.5)).collect();
    let bp = section_covector(ps, &s, &a);
    (s, a, bp)
}

pub fn run(check: CheckName, example: ExampleId, ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    match check {
        CheckName::MomentIdentities => moment_identities(ps, samples, seed),
        CheckName::SectionOrthogonality => section_orthogonality(ps, samples, seed),
        CheckName::ProjectCovector => projections(ps, samples, seed),
        CheckName::TotallyGeodesicTsigma => totally_geodesic(ps, samples, seed),
        CheckName::SymplecticSlice => slices(ps, samples, seed),
        CheckName::PrincipalSplitting => splitting(ps, samples, seed),
        CheckName::WeylIntersection => intersections(ps, samples, seed),
        CheckName::SurjectivityCertificate => certificates(example, ps),
        CheckName::PoissonRestriction => brackets(example, ps, samples, seed),
        CheckName::ReducedAlgebra => reduced(example, ps, samples, seed),
    }
}

fn moment_identities(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let r = check_moment_identities(&ps.action, samples, seed, ps.base_sampler())?;
    let details = json!({ "differential": r.differential.max, "equivariance": r.equivariance.max });
    let mut all = r.differential;
    all.merge(r.equivariance);
    all.count = samples;
    Ok(Outcome::from_sampled(all, 0, details))
}

fn section_orthogonality(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let r = verify_section(ps, samples, seed)?;
    let weyl = compute_weyl_group(ps)?;
    let closure = weyl.closure_residual();
    let order_ok = ps.expected_weyl_order.is_none_or(|o| o == weyl.order());
    let details = json!({
        "orthogonality": r.orthogonality.max,
        "meeting": r.meeting.max,
        "weyl_order": weyl.order(),
        "expected_weyl_order": ps.expected_weyl_order,
        "weyl_closure": closure,
    });
    let mut all = r.orthogonality;
    all.merge(r.meeting);
    all.count = samples;
    let mut out = Outcome::from_sampled(all, 0, details);
    out.max_residual = out.max_residual.max(closure);
    if !order_ok {
        out.max_residual = STRUCTURAL_FAILURE;
    }
    Ok(out)
}

/// Zero-level points are moved into `T*Σ`; a point off the zero level must be refused.
fn projections(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let m = ps.section.ambient();
    let mut residual = SampledMax::new();
    let mut search = 0;
    let mut failed = 0;
    for i in 0..samples {
        let mut rng = sample_rng(seed, "project-covector", i as u64);
        let bp = sample_zero_level(&ps.action, &mut rng, 1, ps.base_sampler()).remove(0);
        let r = match project_covector(ps, &bp) {
            Ok(p) => {
                if matches!(p.method, crate::polar::ProjectionMethod::Search) {
                    search += 1;
                }
                // the image must stay on the orbit's zero level
                p.residual.max(moment_map(&ps.action, &p.point)?.norm())
            }
            Err(_) => {
                failed += 1;
                STRUCTURAL_FAILURE
            }
        };
        residual.observe(i, r, || json!({ "point": bp }));
    }
    let mut rng = sample_rng(seed, "project-covector-control", 0);
    let x = ps.sample_base(&mut rng);
    let control = (0..m.dim()).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    let off = BundlePoint::cotangent(x, control);
    let off_level = moment_map(&ps.action, &off)?.norm();
    let rejected = matches!(project_covector(ps, &off), Err(Error::Precondition(_)));
    let control_ok = rejected || off_level < crate::polar::projection::ZERO_LEVEL_TOL;
    let details = json!({
        "search_fallbacks": search,
        "failed": failed,
        "negative_control": { "moment_norm": off_level, "rejected": rejected },
    });
    let mut out = Outcome::from_sampled(residual, 0, details);
    if !control_ok {
        out.max_residual = STRUCTURAL_FAILURE;
    }
    Ok(out)
}

fn totally_geodesic(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let r = check_tsigma_totally_geodesic(ps, samples, seed)?;
    let details = json!({ "section_sff": r.base.max, "lifted_sff": r.lifted.max });
    let mut all = r.lifted;
    all.merge(r.base);
    all.count = samples;
    Ok(Outcome::from_sampled(all, 0, details))
}

fn slices(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let mut residual = SampledMax::new();
    let (mut spans, mut diagram, mut stabilizer_dim) = (0.0f64, 0.0f64, 0usize);
    let mut dims = Vec::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, "symplectic-slice", i as u64);
        let (s, a, bp) = sample_tsigma(ps, &mut rng);
        let r = symplectic_slice(ps, &bp)?;
        let span = r.j_orbit_orthogonality.max(r.tsigma_orthogonality).max(r.tsigma_in_v).max(r.phi_v_in_ww).max(r.ww_in_phi_v);
        let d = check_slice_diagram(ps, &bp, DIAGRAM_ELEMENTS, seed.wrapping_add(i as u64))?;
        let dim_ok = r.dim_v == 2 * r.dim_w;
        spans = spans.max(span);
        diagram = diagram.max(d.residual).max(d.fixing_residual);
        stabilizer_dim = stabilizer_dim.max(d.stabilizer_dim);
        if !dims.contains(&(r.dim_v, r.dim_w)) {
            dims.push((r.dim_v, r.dim_w));
        }
        let worst = if dim_ok { span.max(d.residual).max(d.fixing_residual) } else { STRUCTURAL_FAILURE };
        residual.observe(i, worst, || json!({ "section_param": s, "fiber_param": a, "dim_v": r.dim_v, "dim_w": r.dim_w }));
    }
    let details = json!({ "span_residual": spans, "diagram_residual": diagram, "stabilizer_dim": stabilizer_dim, "dims_v_w": dims });
    Ok(Outcome::from_sampled(residual, 0, details))
}

fn splitting(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let mut residual = SampledMax::new();
    let mut skipped = 0;
    let mut dims = None;
    for i in 0..samples {
        let mut rng = sample_rng(seed, "principal-splitting", i as u64);
        let (s, a, bp) = sample_tsigma(ps, &mut rng);
        let r = match principal_splitting(ps, &bp) {
            Ok(r) => r,
            Err(Error::NonPrincipal { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        dims = Some((r.orbit_dim, r.j_orbit_dim, r.tsigma_dim));
        let v = if r.total == r.expected { r.max_cross_inner } else { STRUCTURAL_FAILURE };
        residual.observe(i, v, || json!({ "section_param": s, "fiber_param": a, "total": r.total, "expected": r.expected }));
    }
    let details = json!({ "dims_orbit_jorbit_tsigma": dims });
    Ok(Outcome::from_sampled(residual, skipped, details))
}

fn intersections(ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let order = compute_weyl_group(ps)?.order();
    let mut residual = SampledMax::new();
    let (mut landed, mut translates) = (0, 0);
    for i in 0..samples {
        let mut rng = sample_rng(seed, "weyl-intersection", i as u64);
        let (s, a, bp) = sample_tsigma(ps, &mut rng);
        let r = weyl_orbit_intersection(ps, &bp, ORBIT_TRANSLATES, seed.wrapping_add(i as u64))?;
        landed += r.landed;
        translates += r.projected_distance.count;
        let v = if r.images.len() == order {
            r.max_certificate.max(r.projected_distance.max).max(r.landed_distance)
        } else {
            STRUCTURAL_FAILURE
        };
        residual.observe(i, v, || json!({ "section_param": s, "fiber_param": a, "images": r.images.len() }));
    }
    let details = json!({ "weyl_order": order, "translates": translates, "landed_without_projection": landed });
    Ok(Outcome::from_sampled(residual, 0, details))
}

/// Exact: every certificate for one and two copies through degree four, and
/// the extension of every `Π`-invariant of two copies.
fn certificates(example: ExampleId, ps: &PolarStructure) -> Result<Outcome> {
    let mut residual = SampledMax::new();
    let mut failed = Vec::new();
    let mut index = 0;
    for copies in [1, 2] {
        let basis = curated_basis(example, copies)?;
        for d in 0..=MAX_CERTIFIED_DEGREE.min(basis.degree_bound) {
            let c = certify_surjectivity(ps, &basis, d)?;
            let v = if c.passed { c.max_residual_value } else { STRUCTURAL_FAILURE };
            if !c.passed {
                failed.push(json!({ "copies": copies, "degree": d, "unreachable": c.unreachable }));
            }
            residual.observe(
                index,
                v,
                || json!({ "copies": copies, "degree": d, "target_dim": c.target_dim, "achieved_dim": c.achieved_dim }),
            );
            index += 1;
        }
    }
    let basis = curated_basis(example, 2)?;
    let mut extended = 0;
    for f in weyl_invariants(ps, 2, MAX_CERTIFIED_DEGREE)? {
        let v = match extend_invariant(ps, &basis, &f) {
            Ok(_) => {
                extended += 1;
                0.0
            }
            Err(_) => STRUCTURAL_FAILURE,
        };
        residual.observe(index, v, || json!({ "invariant": f.to_string() }));
        index += 1;
    }
    let details = json!({ "certificates": index - extended, "extended_invariants": extended, "failed_certificates": failed });
    Ok(Outcome::from_sampled(residual, 0, details))
}

fn brackets(example: ExampleId, ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let pairs = default_pairs(example, ps)?;
    let per_pair = samples.div_ceil(pairs.len()).max(MIN_PAIR_SAMPLES);
    let r = check_poisson_restriction(ps, &pairs, per_pair, seed)?;
    let mut residual = SampledMax::new();
    for (i, p) in r.pairs.iter().enumerate() {
        let v = if p.invariant && p.exact != Some(false) { p.residual.max } else { STRUCTURAL_FAILURE };
        residual.observe(i, v, || json!({ "first": p.first, "second": p.second, "worst": p.residual.worst }));
    }
    residual.count = r.pairs.iter().map(|p| p.residual.count).sum();
    let details = json!({
        "pairs": r.pairs.len(),
        "exact_compared": r.exact_compared,
        "exact_all": r.exact_all,
        "max_invariance": r.max_invariance,
    });
    Ok(Outcome::from_sampled(residual, 0, details))
}

fn reduced(example: ExampleId, ps: &PolarStructure, samples: usize, seed: u64) -> Result<Outcome> {
    let basis = if example.is_flat() { Some(curated_basis(example, 2)?) } else { None };
    let r = reduced_algebra_compare(ps, basis.as_ref(), samples, seed)?;
    let details = json!(r);
    Ok(Outcome { max_residual: r.max_residual(), sample_count: r.orbit_map.count, worst: r.orbit_map.worst.clone(), skipped: 0, details })
}
