//! Comparison of the invariant algebras of `T*M` at the zero level and of
//! `T*Σ` modulo `Π`.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use super::basis::InvariantBasis;
use super::restrict::{cotangent_form, restrict_cotangent, restrict_poly};
use super::reynolds::FiniteLinearGroup;
use crate::error::Result;
use crate::hamilton::{lift_point, sample_zero_level};
use crate::numcore::{sample_rng, MultiPoly};
use crate::polar::{bundle_distance, compute_weyl_group, project_covector, weyl_orbit_intersection, PolarStructure};
use crate::sampling::SampledMax;

/// Orbits closer than this are treated as equal.
pub const ORBIT_GAP: f64 = 1e-3;
/// Separation demanded of distinct orbits.
pub const SEPARATION_TOL: f64 = 1e-6;
const ZERO_LEVEL_SAMPLES: usize = 500;
const SECTION_SAMPLES: usize = 200;
/// Relative singular value below which a combination counts as vanishing.
const NULL_TOL: f64 = 1e-10;
const PRODUCT_DEGREE: u32 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// Pairs whose orbits are at least [`ORBIT_GAP`] apart.
    pub required: usize,
    /// Pairs drawn on a common orbit (no separation demanded).
    pub identified: usize,
    pub failures: usize,
    /// Smallest generator gap among required pairs.
    pub min_separation: f64,
    pub worst: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    /// Products of generators of degree `≤ 4` considered.
    pub products: usize,
    pub zero_level_samples: usize,
    /// Independent combinations of the products vanishing on `u⁻¹(0)`.
    pub vanishing_combinations: usize,
    /// Largest value of a normalized vanishing combination on `u⁻¹(0)`.
    pub zero_level_max: f64,
    /// Largest value of their restrictions on `T*Σ`.
    pub restricted: SampledMax,
    /// Generators vanishing on `u⁻¹(0)`, with whether their restriction is exactly zero.
    pub vanishing_generators: Vec<(String, bool)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedAlgebraReport {
    pub separation: Option<SeparationReport>,
    pub ideal: Option<IdealReport>,
    /// Distance from the projection of a translate to the `Π`-images of the
    /// projection of the original point.
    pub orbit_map: SampledMax,
}

impl ReducedAlgebraReport {
    /// Worst residual of the three parts against their tolerances, folded into one number:
    /// orbit-map distance, restricted ideal values, and a unit penalty per separation failure.
    pub fn max_residual(&self) -> f64 {
        let sep = self.separation.as_ref().map_or(0.0, |s| s.failures as f64);
        let ideal =
            self.ideal.as_ref().map_or(0.0, |i| if i.vanishing_generators.iter().all(|(_, z)| *z) { i.restricted.max } else { 1.0 });
        self.orbit_map.max.max(ideal).max(sep)
    }
}

fn product_exponents(degrees: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(degrees: &[u32], pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == degrees.len() {
            if cur.iter().any(|&e| e > 0) {
                out.push(cur.clone());
            }
            return;
        }
        let dg = degrees[pos].max(1);
        for e in 0..=left / dg {
            cur[pos] = e;
            rec(degrees, pos + 1, left - e * dg, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    rec(degrees, 0, d, &mut vec![0; degrees.len()], &mut out);
    out
}

fn product(gens: &[MultiPoly], e: &[u32]) -> Result<MultiPoly> {
    let one = MultiPoly::one(gens[0].vars());
    e.iter().enumerate().filter(|(_, &k)| k > 0).try_fold(one, |acc, (i, &k)| acc.try_mul(&gens[i].pow(k)))
}

fn separation(ps: &PolarStructure, basis: &InvariantBasis, samples: usize, seed: u64) -> Result<SeparationReport> {
    let k = ps.section.dim();
    let weyl = FiniteLinearGroup::from_weyl(&compute_weyl_group(ps)?)?;
    let restricted: Vec<MultiPoly> = basis.generators.iter().map(|g| restrict_poly(g, ps)).collect::<Result<_>>()?;
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        let mut v = ps.sample_section_param(rng);
        v.extend((0..k * (basis.copies - 1)).map(|_| rng.random_range(-1.5..1.5)));
        v
    };
    let mut rep = SeparationReport { required: 0, identified: 0, failures: 0, min_separation: f64::INFINITY, worst: None };
    for i in 0..samples {
        let mut rng = sample_rng(seed, "separation", i as u64);
        let p = draw(&mut rng);
        let q = if i % 4 == 0 { weyl.apply_copies(rng.random_range(0..weyl.order()), &p) } else { draw(&mut rng) };
        let gap = (0..weyl.order())
            .map(|w| weyl.apply_copies(w, &p).iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        if gap <= ORBIT_GAP {
            rep.identified += 1;
            continue;
        }
        rep.required += 1;
        let sep = restricted.iter().map(|r| (r.eval_real(&p) - r.eval_real(&q)).abs()).fold(0.0, f64::max);
        if sep <= SEPARATION_TOL {
            rep.failures += 1;
        }
        if sep < rep.min_separation {
            rep.min_separation = sep;
            rep.worst = Some(json!({ "index": i, "first": p, "second": q, "orbit_gap": gap }));
        }
    }
    Ok(rep)
}

fn ideal(ps: &PolarStructure, basis: &InvariantBasis, seed: u64) -> Result<IdealReport> {
    let k = ps.section.dim();
    let gens: Vec<MultiPoly> = basis.generators.iter().map(|g| cotangent_form(ps, g)).collect::<Result<_>>()?;
    let degrees: Vec<u32> = gens.iter().map(|g| g.degree().unwrap_or(0)).collect();
    let exps = product_exponents(&degrees, PRODUCT_DEGREE);
    let products: Vec<MultiPoly> = exps.iter().map(|e| product(&gens, e)).collect::<Result<_>>()?;
    let restricted: Vec<MultiPoly> = products.iter().map(|p| restrict_cotangent(ps, p)).collect::<Result<_>>()?;

    let mut rng = sample_rng(seed, "zero-level", 0);
    let zero = sample_zero_level(&ps.action, &mut rng, ZERO_LEVEL_SAMPLES, ps.base_sampler());
    let coords: Vec<Vec<f64>> = zero.iter().map(|bp| bp.coords()).collect();
    let mut e = DMatrix::from_fn(coords.len(), products.len(), |r, j| products[j].eval_real(&coords[r]));
    let scales: Vec<f64> = (0..products.len()).map(|j| e.column(j).amax().max(1e-300)).collect();
    for (j, s) in scales.iter().enumerate() {
        e.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = e.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let null: Vec<Vec<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv <= NULL_TOL * smax * (coords.len() as f64).sqrt())
        .map(|(r, _)| vt.row(r).iter().copied().collect())
        .collect();
    let zero_level_max = null
        .iter()
        .map(|c| (0..coords.len()).map(|r| (0..c.len()).map(|j| c[j] * e[(r, j)]).sum::<f64>().abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);

    let mut restricted_max = SampledMax::new();
    for i in 0..SECTION_SAMPLES {
        let mut rng = sample_rng(seed, "restricted-ideal", i as u64);
        let s = ps.sample_section_param(&mut rng);
        let eta: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let w: Vec<f64> = s.iter().chain(&eta).copied().collect();
        let vals: Vec<f64> = restricted.iter().zip(&scales).map(|(r, sc)| r.eval_real(&w) / sc).collect();
        let worst = null.iter().map(|c| c.iter().zip(&vals).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max);
        restricted_max.observe(i, worst, || json!({ "section_param": s, "eta": eta }));
    }

    let mut vanishing_generators = Vec::new();
    for (name, g) in basis.names.iter().zip(&gens) {
        let top = coords.iter().map(|c| g.eval_real(c).abs()).fold(0.0, f64::max);
        let size = coords.iter().map(|c| c.iter().map(|v| v.abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        if top <= 1e-9 * (1.0 + size).powi(g.degree().unwrap_or(0) as i32) {
            vanishing_generators.push((name.clone(), restrict_cotangent(ps, g)?.is_zero()));
        }
    }
    Ok(IdealReport {
        products: products.len(),
        zero_level_samples: coords.len(),
        vanishing_combinations: null.len(),
        zero_level_max,
        restricted: restricted_max,
        vanishing_generators,
    })
}

fn orbit_map(ps: &PolarStructure, samples: usize, seed: u64) -> Result<SampledMax> {
    let m = ps.section.ambient();
    let mut acc = SampledMax::new();
    let mut rng = sample_rng(seed, "orbit-map", 0);
    let zero = sample_zero_level(&ps.action, &mut rng, samples, ps.base_sampler());
    for (i, bp) in zero.iter().enumerate() {
        let mut rng = sample_rng(seed, "orbit-map-translate", i as u64);
        let g = ps.action.group.haar_sample(&mut rng);
        let r = (|| -> Result<f64> {
            let first = project_covector(ps, bp)?;
            let second = project_covector(ps, &lift_point(&ps.action, &g, bp)?)?;
            let images = weyl_orbit_intersection(ps, &first.point, 0, seed)?.images;
            Ok(images.iter().map(|im| bundle_distance(m, &im.point, &second.point)).fold(f64::INFINITY, f64::min))
        })()
        .unwrap_or(f64::INFINITY);
        acc.observe(i, r, || json!({ "point": bp, "group_element": g }));
    }
    Ok(acc)
}

/// (a) restricted generators separate distinct `Π`-orbits in `T*Σ`;
/// (b) invariant polynomials vanishing on `u⁻¹(0)` restrict to zero on `T*Σ`;
/// (c) projecting `p` and `g·p` into `T*Σ` lands on one `Π`-orbit.
///
/// Parts (a) and (b) need a polynomial generator list (in the vector picture,
/// two copies) and are skipped without one.
pub fn reduced_algebra_compare(
    ps: &PolarStructure,
    basis: Option<&InvariantBasis>,
    samples: usize,
    seed: u64,
) -> Result<ReducedAlgebraReport> {
    let (separation, ideal) = match basis {
        Some(b) => (Some(separation(ps, b, samples, seed)?), Some(ideal(ps, b, seed)?)),
        None => (None, None),
    };
    Ok(ReducedAlgebraReport { separation, ideal, orbit_map: orbit_map(ps, samples, seed)? })
}
