//! Second fundamental form of `TΣ` inside `(TM, g̃)`.

use rand::Rng;
use serde_json::json;

use super::bundle::tm_sasaki_metric;
use crate::error::Result;
use crate::geometry::christoffel_of;
use crate::geometry::submanifold::{jet_from_d2, second_fundamental_form_core, ParamJet};
use crate::geometry::Submanifold;
use crate::numcore::dual::{seed, seed2};
use crate::numcore::{sample_rng, Mat, D2, D3};
use crate::sampling::SampledMax;

/// Jet of `(s, a) ↦ (P(s), dP(s)·a)`, the induced parametrization of `TΣ`.
pub fn tangent_lift_jet(section: &Submanifold, s: &[f64], a: &[f64]) -> ParamJet {
    let k = s.len();
    let w: Vec<f64> = s.iter().chain(a).copied().collect();
    let wd = seed2(&w);
    let sd: Vec<D3> = seed(&wd[..k]);
    let p = section.point_at::<D3>(&sd);
    let mut out: Vec<D2> = p.iter().map(|c| c.value.clone()).collect();
    for c in &p {
        let mut acc = D2::constant(crate::numcore::D1::constant(0.0));
        for b in 0..k {
            acc = acc + wd[k + b].clone() * c.partial(b);
        }
        out.push(acc);
    }
    jet_from_d2(&out, 2 * k)
}

/// Sasaki norm of `B(u, w)` for unit vectors `u = J c₁`, `w = J c₂` tangent to `TΣ`.
pub fn tsigma_sff_norm(section: &Submanifold, s: &[f64], a: &[f64], c1: &[f64], c2: &[f64]) -> Result<f64> {
    let m = section.ambient();
    let jet = tangent_lift_jet(section, s, a);
    m.check_chart(&jet.point[..m.dim()])?;
    let g: Mat<f64> = tm_sasaki_metric(m, &jet.point)?;
    let gam = christoffel_of(|q| tm_sasaki_metric(m, q), &jet.point)?;
    let unit = |c: &[f64]| -> Vec<f64> {
        let u = jet.jacobian.matvec(c);
        let nrm = g.matvec(&u).iter().zip(&u).map(|(p, q)| p * q).sum::<f64>().sqrt();
        u.iter().map(|x| x / nrm).collect()
    };
    let (u, w) = (unit(c1), unit(c2));
    let b = second_fundamental_form_core(&g, &gam, &jet, &u, &w)?;
    Ok(g.matvec(&b).iter().zip(&b).map(|(p, q)| p * q).sum::<f64>().max(0.0).sqrt())
}

/// Largest Sasaki second fundamental form of `TΣ` over random base
/// parameters (drawn by `sample_param`), fiber vectors and tangent pairs.
pub fn tsigma_violation(
    section: &Submanifold,
    samples: usize,
    seed_value: u64,
    sample_param: &dyn Fn(&mut rand_chacha::ChaCha8Rng) -> Vec<f64>,
) -> Result<SampledMax> {
    let k = section.dim();
    let mut acc = SampledMax::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed_value, "tsigma", i as u64);
        let s = sample_param(&mut rng);
        let a: Vec<f64> = (0..k).map(|_| rng.random_range(-1.5..1.5)).collect();
        let c1: Vec<f64> = (0..2 * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c2: Vec<f64> = (0..2 * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = tsigma_sff_norm(section, &s, &a, &c1, &c2)?;
        acc.observe(i, r, || json!({ "section_param": s, "fiber_param": a, "u": c1, "w": c2 }));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LatitudeCircle, ManifoldModel, SphereMeridian};
    use crate::numcore::finite_diff_jacobian;

    #[test]
    fn lifted_jacobian_matches_finite_differences() {
        let sec = Submanifold::new(ManifoldModel::round_sphere(), LatitudeCircle { colatitude: 0.8 }).unwrap();
        let jet = tangent_lift_jet(&sec, &[0.3], &[1.2]);
        let f = |w: &[f64]| {
            let b = sec.point(&w[..1]);
            let t = sec.tangent_basis(&w[..1]);
            vec![b[0], b[1], t[0][0] * w[1], t[0][1] * w[1]]
        };
        let fd = finite_diff_jacobian(f, &[0.3, 1.2], 1e-5).unwrap();
        for i in 0..4 {
            for j in 0..2 {
                assert!((fd[(i, j)] - jet.jacobian[(i, j)]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn meridian_lift_is_totally_geodesic_and_latitude_is_not() {
        let mer = Submanifold::new(ManifoldModel::round_sphere(), SphereMeridian).unwrap();
        let r = tsigma_sff_norm(&mer, &[1.0], &[0.7], &[1.0, 0.3], &[-0.2, 1.0]).unwrap();
        assert!(r < 1e-10, "{r}");
        let lat = Submanifold::new(ManifoldModel::round_sphere(), LatitudeCircle { colatitude: std::f64::consts::FRAC_PI_4 }).unwrap();
        let r = tsigma_sff_norm(&lat, &[0.0], &[0.7], &[1.0, 0.3], &[1.0, 0.3]).unwrap();
        assert!(r > 1e-2, "{r}");
    }
}
