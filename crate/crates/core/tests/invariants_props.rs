use polarsym::invariants::{
    ambient_vars, certify_surjectivity, curated_basis, is_invariant, restrict_poly, reynolds_finite, FiniteLinearGroup, InvariantBasis,
};
use polarsym::liegroups::{AlgebraElement, ExampleId, GroupElement};
use polarsym::numcore::poly::int;
use polarsym::numcore::{sample_rng, Mat, MultiPoly};
use polarsym::polar::{compute_weyl_group, polar_structure, PolarStructure};
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

const FLAT: [ExampleId; 4] = [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)];

/// Weighted group elements integrating polynomials of degree `≤ 4` in the
/// representation exactly against Haar measure.
fn cubature(ps: &PolarStructure) -> Vec<(GroupElement, f64)> {
    let group = &ps.action.group;
    let exp = |c: Vec<f64>| group.exp(&AlgebraElement(c), 1.0).unwrap();
    let n = 18;
    let angle = |i: usize| 2.0 * PI * i as f64 / n as f64;
    match group.dim() {
        1 => (0..n).map(|i| (exp(vec![angle(i)]), 1.0 / n as f64)).collect(),
        2 if group.is_abelian() => (0..n * n).map(|i| (exp(vec![angle(i / n), angle(i % n)]), 1.0 / (n * n) as f64)).collect(),
        3 => so3_cubature(n),
        d => panic!("no cubature for a {d}-dimensional group"),
    }
}

/// Hopf coordinates on the unit quaternions: `u = sin²η` is uniform under Haar
/// measure, so Gauss-Legendre in `u` and trapezoids in both phases are exact.
fn so3_cubature(n: usize) -> Vec<(GroupElement, f64)> {
    let gauss = [
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let mut out = Vec::new();
    for &(t, w) in &gauss {
        let u: f64 = 0.5 * (t + 1.0);
        let (c, s) = ((1.0 - u).sqrt(), u.sqrt());
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (2.0 * PI * i as f64 / n as f64, 2.0 * PI * j as f64 / n as f64);
                let q = [c * a.cos(), c * a.sin(), s * b.cos(), s * b.sin()];
                out.push((GroupElement { matrix: rotation(q) }, 0.5 * w / (n * n) as f64));
            }
        }
    }
    out
}

fn rotation([w, x, y, z]: [f64; 4]) -> Mat<f64> {
    Mat::from_vec(
        3,
        3,
        vec![
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    )
}

/// `(R_G p)(y)` by cubature.
fn group_average(ps: &PolarStructure, nodes: &[(GroupElement, f64)], p: &MultiPoly, y: &[f64]) -> f64 {
    nodes.iter().map(|(g, w)| w * p.eval_real(&ps.action.act(g, y))).sum()
}

fn quartic(n: usize) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0u32..=4, n), -3i64..=3);
    prop::collection::vec(term, 1..5).prop_map(move |terms| {
        let vars = ambient_vars(n, 1).unwrap();
        terms.into_iter().fold(MultiPoly::zero(&vars), |acc, (mut e, c)| {
            while e.iter().sum::<u32>() > 4 {
                let i = e.iter().position(|&k| k > 0).unwrap();
                e[i] -= 1;
            }
            &acc + &MultiPoly::monomial(&vars, e, int(c))
        })
    })
}

fn flat_case() -> impl Strategy<Value = (ExampleId, MultiPoly, u64)> {
    prop::sample::select(FLAT.to_vec()).prop_flat_map(|id| (Just(id), quartic(id.action().dim()), any::<u64>()))
}

#[test]
fn cubature_integrates_constants_and_fixes_invariants() {
    for id in FLAT {
        let ps = polar_structure(id);
        let nodes = cubature(&ps);
        assert!((nodes.iter().map(|(_, w)| w).sum::<f64>() - 1.0).abs() < 1e-12, "{id}");
        let basis = curated_basis(id, 1).unwrap();
        let mut rng = sample_rng(5, "cubature", 0);
        for g in &basis.generators {
            let y = ps.sample_base(&mut rng);
            let avg = group_average(&ps, &nodes, g, &y);
            assert!((avg - g.eval_real(&y)).abs() < 1e-9 * (1.0 + avg.abs()), "{id}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// `R_G p` is G-invariant and its restriction to the section is Weyl
    /// invariant, for arbitrary `p` of degree `≤ 4`.
    #[test]
    fn averaged_polynomials_restrict_to_weyl_invariants((id, p, seed) in flat_case()) {
        let ps = polar_structure(id);
        let nodes = cubature(&ps);
        let weyl = compute_weyl_group(&ps).unwrap();
        let mut rng = sample_rng(seed, "reynolds", 0);
        let y = ps.sample_base(&mut rng);
        let h = ps.action.group.haar_sample(&mut rng);
        let avg = group_average(&ps, &nodes, &p, &y);
        let moved = group_average(&ps, &nodes, &p, &ps.action.act(&h, &y));
        prop_assert!((avg - moved).abs() < 1e-8 * (1.0 + avg.abs()), "{avg} vs {moved}");

        let s: Vec<f64> = (0..ps.section.dim()).map(|_| rng.random_range(-1.5..1.5)).collect();
        let on_section = group_average(&ps, &nodes, &p, &ps.section.point(&s));
        for map in &weyl.section_maps {
            let ws = map.matvec(&s);
            let image = group_average(&ps, &nodes, &p, &ps.section.point(&ws));
            prop_assert!((image - on_section).abs() < 1e-8 * (1.0 + on_section.abs()));
        }
    }
}

/// Averaging does not commute with restriction for non-invariant input.
#[test]
fn restriction_does_not_intertwine_averages_in_general() {
    let ps = polar_structure(ExampleId::So2R2);
    let vars = ambient_vars(2, 1).unwrap();
    let x1 = MultiPoly::var(&vars, 0);
    let p = &x1 * &x1;
    let weyl = FiniteLinearGroup::from_weyl(&compute_weyl_group(&ps).unwrap()).unwrap();
    let restricted = restrict_poly(&p, &ps).unwrap();
    // x1² is already invariant under the reflection of the section line
    assert_eq!(reynolds_finite(&restricted, &weyl).unwrap(), restricted);
    let a = 1.3;
    let y = ps.section.point(&[a]);
    let averaged = group_average(&ps, &cubature(&ps), &p, &y);
    assert!((averaged - 0.5 * y.iter().map(|t| t * t).sum::<f64>()).abs() < 1e-12);
    assert!((averaged - restricted.eval_real(&[a])).abs() > 0.1);
}

#[test]
fn restricted_generators_are_weyl_invariant() {
    for id in FLAT {
        let ps = polar_structure(id);
        let weyl = FiniteLinearGroup::from_weyl(&compute_weyl_group(&ps).unwrap()).unwrap();
        for m in [1, 2] {
            let basis = curated_basis(id, m).unwrap();
            for (name, g) in basis.names.iter().zip(&basis.generators) {
                let r = restrict_poly(g, &ps).unwrap();
                assert!(is_invariant(&r, &weyl).unwrap(), "{id} m={m} {name}");
                assert_eq!(reynolds_finite(&r, &weyl).unwrap(), r);
            }
        }
    }
}

#[test]
fn generator_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for id in FLAT {
        let basis = curated_basis(id, 2).unwrap();
        let path = dir.path().join(format!("{id}.gens"));
        std::fs::write(&path, basis.to_config()).unwrap();
        let loaded = InvariantBasis::load(&path).unwrap();
        assert_eq!(loaded, basis, "{id}");
    }
    let bad = dir.path().join("bad.gens");
    std::fs::write(&bad, "not a generator file").unwrap();
    assert!(InvariantBasis::load(&bad).is_err());
}

#[test]
fn passing_certificates_report_an_exact_zero() {
    let ps = polar_structure(ExampleId::So2R2);
    let basis = curated_basis(ExampleId::So2R2, 2).unwrap();
    let cert = certify_surjectivity(&ps, &basis, 4).unwrap();
    assert!(cert.passed);
    assert_eq!(cert.max_residual, "0");
    let cut = certify_surjectivity(&ps, &basis.without("x.p").unwrap(), 4).unwrap();
    assert!(!cut.passed);
    assert!(cut.max_residual_value > 0.0);
    assert_ne!(cut.max_residual, "0");
}
