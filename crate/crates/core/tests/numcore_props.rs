use nalgebra::DMatrix;
use polarsym::numcore::poly::{int, var_names};
use polarsym::numcore::{dual_gradient, fd_gradient, least_squares, MultiPoly};
use proptest::prelude::*;

fn poly_strategy(nvars: usize, max_degree: u32) -> impl Strategy<Value = MultiPoly> {
    let term = (prop::collection::vec(0u32..=max_degree, nvars), -5i64..=5);
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let vars = var_names("x", nvars);
        terms.into_iter().fold(MultiPoly::zero(&vars), |acc, (mut e, c)| {
            // clamp the total degree
            while e.iter().sum::<u32>() > max_degree {
                let i = e.iter().position(|&k| k > 0).unwrap();
                e[i] -= 1;
            }
            &acc + &MultiPoly::monomial(&vars, e, int(c))
        })
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dual_gradient_matches_central_differences(p in poly_strategy(3, 4), x in point(3)) {
        let exact = dual_gradient(|q| p.eval_real(q), &x).unwrap();
        let fd = fd_gradient(|q| p.eval_real(q), &x, 1e-5).unwrap();
        for (a, b) in exact.iter().zip(&fd) {
            prop_assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn ring_axioms_hold_exactly(a in poly_strategy(3, 4), b in poly_strategy(3, 4), c in poly_strategy(3, 4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn least_squares_residual_is_reported_faithfully(
        entries in prop::collection::vec(-2.0f64..2.0, 15),
        rhs in prop::collection::vec(-2.0f64..2.0, 5),
    ) {
        let a = DMatrix::from_row_slice(5, 3, &entries);
        let r = least_squares(&a, &rhs).unwrap();
        let ax = &a * nalgebra::DVector::from_column_slice(&r.solution);
        let recomputed = ax.iter().zip(&rhs).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        prop_assert!((recomputed - r.residual_norm).abs() < 1e-12);
    }

    #[test]
    fn sparse_text_round_trips(p in poly_strategy(3, 4)) {
        let q = MultiPoly::parse_sparse(p.vars(), &p.to_sparse()).unwrap();
        prop_assert_eq!(p, q);
    }
}
