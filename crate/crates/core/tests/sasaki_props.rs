use polarsym::geometry::ManifoldModel;
use polarsym::liegroups::ExampleId;
use polarsym::numcore::{sample_rng, Mat};
use polarsym::polar::polar_structure;
use polarsym::sasaki::{
    sasaki_connection, sasaki_inner, symplectic_gram, tm_sasaki_metric, to_coords, BundlePoint, BundleTangent, CurvatureSlots, LiftKind,
    LiftedField, LocalField,
};
use proptest::prelude::*;
use rand::Rng;

fn cotangent_sample(id: ExampleId, seed: u64) -> (ManifoldModel, BundlePoint) {
    let ps = polar_structure(id);
    let mut rng = sample_rng(seed, "bundle", 0);
    let x = ps.sample_base(&mut rng);
    let xi: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    (ps.action.manifold.clone(), BundlePoint::cotangent(x, xi))
}

fn canonical(n: usize) -> Mat<f64> {
    Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) if j - n == i => 1.0,
        (false, true) if i - n == j => -1.0,
        _ => 0.0,
    })
}

fn random_field(rng: &mut impl Rng, n: usize) -> LocalField {
    let value = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let entries = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    LocalField { value, jacobian: Mat::from_vec(n, n, entries) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn omega_is_the_canonical_form(id in prop::sample::select(ExampleId::ALL.to_vec()), seed in any::<u64>()) {
        let (m, bp) = cotangent_sample(id, seed);
        let w = symplectic_gram(&m, &bp).unwrap();
        prop_assert!(w.dist(&canonical(bp.dim())) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// `dΩ = 0` by central differences of the components of `g̃(J·,·)`.
    #[test]
    fn omega_is_closed_on_the_sphere(seed in any::<u64>()) {
        let (m, bp) = cotangent_sample(ExampleId::S1S2, seed);
        let n = 2 * bp.dim();
        let h = 1e-5;
        let p0 = bp.coords();
        let omega_at = |p: &[f64]| symplectic_gram(&m, &BundlePoint::cotangent(p[..n / 2].to_vec(), p[n / 2..].to_vec())).unwrap();
        let deriv: Vec<Mat<f64>> = (0..n)
            .map(|a| {
                let mut up = p0.clone();
                let mut dn = p0.clone();
                up[a] += h;
                dn[a] -= h;
                omega_at(&up).sub(&omega_at(&dn)).scaled(&(0.5 / h))
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let cyc = deriv[i][(j, k)] + deriv[j][(k, i)] + deriv[k][(i, j)];
                    prop_assert!(cyc.abs() < 1e-5);
                }
            }
        }
    }

    /// `C g̃(A, B) = g̃(∇̃_C A, B) + g̃(A, ∇̃_C B)` for lifted fields on `TS²`.
    #[test]
    fn lift_formulas_are_metric_compatible(seed in any::<u64>(), kinds in prop::collection::vec(any::<bool>(), 3)) {
        let m = ManifoldModel::round_sphere();
        let mut rng = sample_rng(seed, "compat", 0);
        let x = vec![rng.random_range(0.4..2.7), rng.random_range(-3.0..3.0)];
        let v = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let bp = BundlePoint::tangent(x.clone(), v);
        let kind = |b: bool| if b { LiftKind::Horizontal } else { LiftKind::Vertical };
        let fields: Vec<LiftedField> = kinds.iter().map(|&k| LiftedField { kind: kind(k), field: random_field(&mut rng, 2) }).collect();
        let (a, b, c) = (&fields[0], &fields[1], &fields[2]);
        let split = |f: &LiftedField, at: &[f64]| {
            let val = f.field.eval(&x, at);
            match f.kind {
                LiftKind::Horizontal => BundleTangent::new(val, vec![0.0; 2]),
                LiftKind::Vertical => BundleTangent::new(vec![0.0; 2], val),
            }
        };
        let inner_at = |p: &[f64]| -> f64 {
            let q = BundlePoint::tangent(p[..2].to_vec(), p[2..].to_vec());
            let ca = to_coords(&m, &q, &split(a, &p[..2])).unwrap();
            let cb = to_coords(&m, &q, &split(b, &p[..2])).unwrap();
            let g: Mat<f64> = tm_sasaki_metric(&m, p).unwrap();
            g.matvec(&ca).iter().zip(&cb).map(|(s, t)| s * t).sum()
        };
        let dir = to_coords(&m, &bp, &split(c, &x)).unwrap();
        let p0 = bp.coords();
        let h = 1e-5;
        let shift = |k: f64| -> Vec<f64> { p0.iter().zip(&dir).map(|(p, d)| p + k * d).collect() };
        let lhs = (inner_at(&shift(h)) - inner_at(&shift(-h))) / (2.0 * h);
        let slots = CurvatureSlots::IDENTITY;
        let na = sasaki_connection(&m, &bp, c, a, slots).unwrap();
        let nb = sasaki_connection(&m, &bp, c, b, slots).unwrap();
        let rhs = sasaki_inner(&m, &bp, &na, &split(b, &x)) + sasaki_inner(&m, &bp, &split(a, &x), &nb);
        prop_assert!((lhs - rhs).abs() < 1e-5, "{lhs} vs {rhs}");
    }
}
