use polarsym::hamilton::{moment_map, sample_zero_level, zero_level_covector};
use polarsym::liegroups::ExampleId;
use polarsym::numcore::sample_rng;
use polarsym::polar::{
    polar_structure, principal_splitting, project_covector, section_covector, slice_polarity, symplectic_slice, PolarStructure,
};
use polarsym::sasaki::BundlePoint;
use proptest::prelude::*;
use rand::Rng;

fn tsigma_point(ps: &PolarStructure, seed: u64) -> BundlePoint {
    let mut rng = sample_rng(seed, "tsigma-point", 0);
    let s = ps.sample_section_param(&mut rng);
    let a: Vec<f64> = (0..s.len()).map(|_| rng.random_range(-1.5..1.5)).collect();
    section_covector(ps, &s, &a)
}

#[test]
fn zero_level_points_project_into_tsigma() {
    for id in ExampleId::ALL {
        let ps = polar_structure(id);
        let mut rng = sample_rng(3, "zero-level-props", 0);
        for bp in sample_zero_level(&ps.action, &mut rng, 200, ps.base_sampler()) {
            let p = project_covector(&ps, &bp).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(p.residual < 1e-7, "{id}: {}", p.residual);
            // the projected point is a translate of the original
            let moved = polarsym::hamilton::lift_point(&ps.action, &p.element, &bp).unwrap();
            assert!(polarsym::polar::bundle_distance(ps.section.ambient(), &moved, &p.point) < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn orbit_directions_split_orthogonally(id in prop::sample::select(ExampleId::ALL.to_vec()), seed in any::<u64>()) {
        let ps = polar_structure(id);
        let bp = tsigma_point(&ps, seed);
        let r = symplectic_slice(&ps, &bp).unwrap();
        prop_assert!(r.j_orbit_orthogonality < 1e-8);
        prop_assert!(r.tsigma_orthogonality < 1e-8);
        prop_assert_eq!(r.dim_v, 2 * (bp.dim() - r.orbit_dim));
        prop_assert_eq!(r.dim_v, 2 * r.dim_w);
        let split = principal_splitting(&ps, &bp).unwrap();
        prop_assert_eq!(split.total, split.expected);
    }
}

#[test]
fn slice_representation_is_polar() {
    for id in ExampleId::ALL {
        let ps = polar_structure(id);
        assert!(slice_polarity(&ps, 50, 4).unwrap().max < 1e-8, "{id}");
    }
}

/// Singular points of flat sections: the origin, and repeated eigenvalues or
/// vanishing moduli.
fn singular_points(id: ExampleId) -> Vec<Vec<f64>> {
    let ps = polar_structure(id);
    let k = ps.section.dim();
    let mut out = vec![ps.section.point(&vec![0.0; k])];
    match id {
        ExampleId::So3Sym0 => out.push(ps.section.point(&[1.0, 1.0])),
        ExampleId::TorusCn(_) => out.push(ps.section.point(&[0.0, 1.3])),
        _ => {}
    }
    out
}

#[test]
fn singular_strata_are_handled() {
    for id in [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)] {
        let ps = polar_structure(id);
        for (j, x) in singular_points(id).into_iter().enumerate() {
            let iso = ps.action.isotropy_algebra(&x).unwrap();
            assert!(iso.len() > ps.principal_isotropy_dim, "{id}: {x:?} is not singular");
            // isotropy moves section directions normally to the section
            let s = ps.section.locate(&x);
            let m = ps.section.ambient();
            for t in ps.section.tangent_basis(&s) {
                for k in &iso {
                    let w = ps.action.generator_field(k, &t).unwrap();
                    for t2 in ps.section.tangent_basis(&s) {
                        assert!(m.inner(&x, &w, &t2).abs() < 1e-9, "{id}");
                    }
                }
            }
            for i in 0..20 {
                let mut rng = sample_rng(9, "singular", (j * 100 + i) as u64);
                let xi = zero_level_covector(&ps.action, &x, &mut rng);
                let bp = BundlePoint::cotangent(x.clone(), xi);
                assert!(moment_map(&ps.action, &bp).unwrap().norm() < 1e-9);
                let p = project_covector(&ps, &bp).unwrap_or_else(|e| panic!("{id} {x:?}: {e}"));
                assert!(p.residual < 1e-7);
                let r = symplectic_slice(&ps, &p.point).unwrap();
                assert_eq!(r.dim_v, 2 * r.dim_w, "{id} {x:?}");
            }
        }
    }
}
