//! `G·p ∩ T*Σ = Π·p` for points of `T*Σ`.

use serde::Serialize;
use serde_json::json;

use super::projection::{bundle_distance, cotangent_section_residual, locate_covector, project_covector, section_covector, COTANGENT_TOL};
use super::structure::{compute_weyl_group, PolarStructure};
use crate::error::{Error, Result};
use crate::hamilton::lift_point;
use crate::numcore::sample_rng;
use crate::sampling::SampledMax;
use crate::sasaki::BundlePoint;

/// Translates closer than this to `T*Σ` count as landing on it.
pub const LANDING_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct WeylImage {
    pub section_param: Vec<f64>,
    pub fiber_param: Vec<f64>,
    pub point: BundlePoint,
    /// Distance between the point built from `Π` acting on parameters and
    /// the group element applied to `p`.
    pub certificate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitIntersectionReport {
    /// Distinct points of `Π·p`.
    pub images: Vec<WeylImage>,
    pub max_certificate: f64,
    /// Random translates that already lay on `T*Σ`.
    pub landed: usize,
    pub landed_distance: f64,
    /// Distance from projected translates to the nearest point of `Π·p`.
    pub projected_distance: SampledMax,
}

/// Every `Π`-image of `p` lies on `G·p`, and every point of `G·p` that lies on
/// `T*Σ` (random translates, and random translates moved back into `T*Σ`)
/// is a `Π`-image.
pub fn weyl_orbit_intersection(ps: &PolarStructure, bp: &BundlePoint, samples: usize, seed: u64) -> Result<OrbitIntersectionReport> {
    let m = ps.section.ambient();
    let (s, a, r) = locate_covector(ps, bp)?;
    if r > COTANGENT_TOL {
        return Err(Error::Precondition(format!("point is {r:.3e} away from T*{}", ps.section.name())));
    }
    let weyl = compute_weyl_group(ps)?;
    let mut images: Vec<WeylImage> = Vec::new();
    let mut max_certificate: f64 = 0.0;
    for (e, map) in weyl.elements.iter().zip(&weyl.section_maps) {
        let s2 = map.matvec(&s);
        let a2 = map.matvec(&a);
        let built = section_covector(ps, &s2, &a2);
        let moved = lift_point(&ps.action, e, bp)?;
        let certificate = bundle_distance(m, &built, &moved);
        max_certificate = max_certificate.max(certificate);
        if images.iter().all(|im| bundle_distance(m, &im.point, &built) > 1e-9) {
            images.push(WeylImage { section_param: s2, fiber_param: a2, point: built, certificate });
        }
    }
    let nearest = |q: &BundlePoint| images.iter().map(|im| bundle_distance(m, &im.point, q)).fold(f64::INFINITY, f64::min);

    let mut landed = 0;
    let mut landed_distance: f64 = 0.0;
    let mut projected_distance = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, "weyl-orbit", i as u64);
        let g = ps.action.group.haar_sample(&mut rng);
        let q = lift_point(&ps.action, &g, bp)?;
        if cotangent_section_residual(ps, &q) < LANDING_TOL {
            landed += 1;
            landed_distance = landed_distance.max(nearest(&q));
        }
        let d = match project_covector(ps, &q) {
            Ok(p) => nearest(&p.point),
            Err(_) => f64::INFINITY,
        };
        projected_distance.observe(i, d, || json!({ "group_element": g }));
    }
    Ok(OrbitIntersectionReport { images, max_certificate, landed, landed_distance, projected_distance })
}
