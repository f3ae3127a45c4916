use polarsym::hamilton::{generator_derivative_residual, poisson_bracket, poly_bracket, ObservableFn};
use polarsym::invariants::{ambient_vars, cotangent_form, curated_basis};
use polarsym::liegroups::ExampleId;
use polarsym::numcore::poly::int;
use polarsym::numcore::{sample_rng, MultiPoly};
use polarsym::polar::polar_structure;
use polarsym::sasaki::BundlePoint;
use proptest::prelude::*;
use rand::Rng;

const FLAT: [ExampleId; 4] = [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)];

/// Random polynomial of degree `≤ 2` on `T*M` for a flat example of dimension `n`.
fn quadratic(n: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((0..2 * n, 0..2 * n, -3i64..=3, 0u8..3), 1..5).prop_map(move |terms| {
        let vars = ambient_vars(n, 2).unwrap();
        terms.into_iter().fold(MultiPoly::zero(&vars), |acc, (i, j, c, shape)| {
            let t = match shape {
                0 => MultiPoly::constant(&vars, int(c)),
                1 => MultiPoly::var(&vars, i).scale(&int(c)),
                _ => (&MultiPoly::var(&vars, i) * &MultiPoly::var(&vars, j)).scale(&int(c)),
            };
            &acc + &t
        })
    })
}

fn flat_case() -> impl Strategy<Value = (ExampleId, MultiPoly, MultiPoly, MultiPoly, u64)> {
    prop::sample::select(FLAT.to_vec()).prop_flat_map(|id| {
        let n = id.action().dim();
        (Just(id), quadratic(n), quadratic(n), quadratic(n), any::<u64>())
    })
}

fn random_point(id: ExampleId, seed: u64) -> BundlePoint {
    let ps = polar_structure(id);
    let mut rng = sample_rng(seed, "bracket-point", 0);
    let x = ps.sample_base(&mut rng);
    let xi = (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    BundlePoint::cotangent(x, xi)
}

fn obs(name: &str, p: &MultiPoly) -> ObservableFn {
    ObservableFn::polynomial(name, p.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn jacobi_identity((id, f, g, h, seed) in flat_case()) {
        let m = id.action().manifold;
        let bp = random_point(id, seed);
        let fg = poly_bracket(&f, &g).unwrap();
        let gh = poly_bracket(&g, &h).unwrap();
        let hf = poly_bracket(&h, &f).unwrap();
        let cyclic = poisson_bracket(&m, &obs("fg", &fg), &obs("h", &h), &bp).unwrap()
            + poisson_bracket(&m, &obs("gh", &gh), &obs("f", &f), &bp).unwrap()
            + poisson_bracket(&m, &obs("hf", &hf), &obs("g", &g), &bp).unwrap();
        prop_assert!(cyclic.abs() < 1e-7);
        // the exact cyclic sum vanishes identically
        let exact = &(&poly_bracket(&fg, &h).unwrap() + &poly_bracket(&gh, &f).unwrap()) + &poly_bracket(&hf, &g).unwrap();
        prop_assert!(exact.is_zero());
    }

    #[test]
    fn leibniz_rule((id, f, g, h, seed) in flat_case()) {
        let m = id.action().manifold;
        let bp = random_point(id, seed);
        let (of, og, oh) = (obs("f", &f), obs("g", &g), obs("h", &h));
        let lhs = poisson_bracket(&m, &of.product(&og), &oh, &bp).unwrap();
        let rhs = of.value(&bp).unwrap() * poisson_bracket(&m, &og, &oh, &bp).unwrap()
            + og.value(&bp).unwrap() * poisson_bracket(&m, &of, &oh, &bp).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()));
    }

    #[test]
    fn numeric_and_exact_brackets_agree((id, f, g, _h, seed) in flat_case()) {
        let m = id.action().manifold;
        let bp = random_point(id, seed);
        let exact = poly_bracket(&f, &g).unwrap().eval_real(&bp.coords());
        let numeric = poisson_bracket(&m, &obs("f", &f), &obs("g", &g), &bp).unwrap();
        prop_assert!((exact - numeric).abs() < 1e-8 * (1.0 + exact.abs()));
    }

    #[test]
    fn leibniz_on_the_sphere(seed in any::<u64>()) {
        let id = ExampleId::S1S2;
        let m = id.action().manifold;
        let bp = random_point(id, seed);
        let h = ObservableFn::height();
        let k = ObservableFn::kinetic(&m);
        let s = h.sin().sum(&k);
        let lhs = poisson_bracket(&m, &h.product(&s), &k, &bp).unwrap();
        let rhs = h.value(&bp).unwrap() * poisson_bracket(&m, &s, &k, &bp).unwrap()
            + s.value(&bp).unwrap() * poisson_bracket(&m, &h, &k, &bp).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()));
    }
}

#[test]
fn invariants_are_annihilated_by_generators() {
    for id in FLAT {
        let ps = polar_structure(id);
        let basis = curated_basis(id, 2).unwrap();
        for (name, g) in basis.names.iter().zip(&basis.generators) {
            let f = ObservableFn::polynomial(name, cotangent_form(&ps, g).unwrap());
            let r = generator_derivative_residual(&ps.action, &f, 30, 5, ps.base_sampler()).unwrap();
            assert!(r.max < 1e-8, "{id} {name}: {}", r.max);
        }
    }
    let ps = polar_structure(ExampleId::S1S2);
    let m = ps.section.ambient();
    for f in [ObservableFn::height(), ObservableFn::kinetic(m), ObservableFn::height().product(&ObservableFn::kinetic(m)).exp()] {
        let r = generator_derivative_residual(&ps.action, &f, 30, 5, ps.base_sampler()).unwrap();
        assert!(r.max < 1e-8, "{f}: {}", r.max);
    }
}
