use polarsym::geometry::{christoffel, geodesic_flow, ManifoldModel};
use polarsym::liegroups::{AlgebraElement, ExampleId};
use polarsym::numcore::sample_rng;
use polarsym::polar::{latitude_control, polar_structure};
use polarsym::sasaki::connection::christoffel_fd;
use proptest::prelude::*;
use rand::Rng;

fn example() -> impl Strategy<Value = ExampleId> {
    prop::sample::select(ExampleId::ALL.to_vec())
}

fn unit_vec(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-3);
    v.iter().map(|x| x / nrm).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn action_is_a_group_action(id in example(), seed in any::<u64>()) {
        let ps = polar_structure(id);
        let mut rng = sample_rng(seed, "compose", 0);
        let x = ps.sample_base(&mut rng);
        let g = ps.action.group.haar_sample(&mut rng);
        let h = ps.action.group.haar_sample(&mut rng);
        let lhs = ps.action.act(&g, &ps.action.act(&h, &x));
        let rhs = ps.action.act(&g.compose(&h), &x);
        prop_assert!(ps.action.manifold.coord_dist(&lhs, &rhs) < 1e-9);
        prop_assert!(ps.action.isometry_residual(&g, &x) < 1e-9);
    }

    #[test]
    fn generator_field_is_linear(id in example(), seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let ps = polar_structure(id);
        let mut rng = sample_rng(seed, "linear", 0);
        let x = ps.sample_base(&mut rng);
        let k = ps.action.group.dim();
        let u: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let comb = AlgebraElement(u.iter().zip(&v).map(|(p, q)| a * p + b * q).collect());
        let lhs = ps.action.generator_field(&comb, &x).unwrap();
        let fu = ps.action.generator_field(&AlgebraElement(u), &x).unwrap();
        let fv = ps.action.generator_field(&AlgebraElement(v), &x).unwrap();
        for i in 0..x.len() {
            prop_assert!((lhs[i] - a * fu[i] - b * fv[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn generators_are_killing(id in example(), seed in any::<u64>()) {
        let ps = polar_structure(id);
        let mut rng = sample_rng(seed, "killing", 0);
        let x = ps.sample_base(&mut rng);
        let k = ps.action.group.dim();
        let xi = AlgebraElement((0..k).map(|_| rng.random_range(-1.0..1.0)).collect());
        let (u, v) = (unit_vec(&mut rng, x.len()), unit_vec(&mut rng, x.len()));
        prop_assert!(ps.action.killing_residual(&xi, &x, &u, &v).unwrap() < 1e-6);
    }

    #[test]
    fn christoffel_matches_metric_differences(id in example(), seed in any::<u64>()) {
        let m: ManifoldModel = id.action().manifold;
        let ps = polar_structure(id);
        let mut rng = sample_rng(seed, "christoffel", 0);
        let x = ps.sample_base(&mut rng);
        let exact = christoffel(&m, &x).unwrap();
        let fd = christoffel_fd(|p| Ok(m.metric(p)), &x, 1e-5).unwrap();
        for (a, b) in exact.data.iter().zip(&fd.data) {
            prop_assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn geodesics_tangent_to_the_section_stay_on_it(id in example(), seed in any::<u64>()) {
        let ps = polar_structure(id);
        let m = ps.section.ambient();
        let mut rng = sample_rng(seed, "geodesic", 0);
        let s = ps.sample_section_param(&mut rng);
        let x = ps.section.point(&s);
        if id == ExampleId::S1S2 {
            // a quarter-radian arc must not reach a pole of the chart
            prop_assume!(x[0] > 0.3 && x[0] < std::f64::consts::PI - 0.3);
        }
        let t = ps.section.tangent_basis(&s);
        let c: Vec<f64> = t.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..x.len()).map(|i| t.iter().zip(&c).map(|(tv, cv)| tv[i] * cv).sum()).collect();
        let scale = 0.25 / m.norm(&x, &v).max(1e-3);
        let v: Vec<f64> = v.iter().map(|e| e * scale).collect();
        let end = geodesic_flow(m, &x, &v, 1.0).unwrap();
        prop_assert!(ps.section.distance(&end.point) < 1e-5);
    }

    #[test]
    fn second_fundamental_form_is_symmetric(seed in any::<u64>(), control in any::<bool>()) {
        let ps = if control { latitude_control() } else { polar_structure(ExampleId::S1S2) };
        let mut rng = sample_rng(seed, "sff", 0);
        let s = ps.sample_section_param(&mut rng);
        let x = ps.section.point(&s);
        let (u, v) = (unit_vec(&mut rng, x.len()), unit_vec(&mut rng, x.len()));
        let t = ps.section.tangent_basis(&s);
        let proj = |w: &[f64]| -> Vec<f64> {
            let m = ps.section.ambient();
            let k = m.inner(&x, w, &t[0]) / m.inner(&x, &t[0], &t[0]);
            t[0].iter().map(|e| e * k).collect()
        };
        let (pu, pv) = (proj(&u), proj(&v));
        let b1 = ps.section.sff_at_param(&s, &pu, &pv).unwrap();
        let b2 = ps.section.sff_at_param(&s, &pv, &pu).unwrap();
        for (a, b) in b1.iter().zip(&b2) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }
}
