use etaforge_core::numeric::{c64, cis, fractional_part, winding_number, CMat, DyadicRational, TrigPoly};
use proptest::prelude::*;

fn dyadic() -> impl Strategy<Value = DyadicRational> {
    (-100_000i64..100_000, 0u32..16).prop_map(|(p, e)| DyadicRational::new(p, e))
}

fn poly(rows: usize, cols: usize) -> impl Strategy<Value = TrigPoly> {
    proptest::collection::vec(-1.0f64..1.0, 3 * rows * cols * 2).prop_map(move |v| {
        let terms = (-1..=1i64).map(|k| {
            let base = ((k + 1) as usize) * rows * cols * 2;
            let m = CMat::from_fn(rows, cols, |i, j| {
                let at = base + 2 * (i * cols + j);
                c64(v[at], v[at + 1])
            });
            (k, m)
        });
        TrigPoly::from_terms(rows, cols, terms).unwrap()
    })
}

proptest! {
    #[test]
    fn fractional_part_lies_in_unit_interval(v in dyadic()) {
        let f = fractional_part(v);
        prop_assert!(f.to_f64() >= 0.0 && f.to_f64() < 1.0);
        prop_assert!((v - f).is_integer());
        prop_assert!(f.exponent() <= v.exponent());
    }

    #[test]
    fn addition_is_exact(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a - a, DyadicRational::ZERO);
        prop_assert_eq!((a + b).to_f64(), a.to_f64() + b.to_f64());
    }

    #[test]
    fn fractional_part_is_additive_mod_one(a in dyadic(), b in dyadic()) {
        prop_assert_eq!(fractional_part(a + b), fractional_part(fractional_part(a) + fractional_part(b)));
    }

    #[test]
    fn canonical_form_is_unique(p in -10_000i64..10_000, e in 0u32..10, s in 0u32..8) {
        let v = DyadicRational::new(p, e);
        prop_assert_eq!(DyadicRational::new(p << s, e + s), v);
        prop_assert!(v.numerator() % 2 != 0 || v.exponent() == 0);
    }

    #[test]
    fn products_evaluate_pointwise(a in poly(2, 3), b in poly(3, 2), x in 0.0f64..6.3) {
        let ab = a.try_mul(&b).unwrap();
        let direct = a.eval(x) * b.eval(x);
        prop_assert!((ab.eval(x) - direct).norm() < 1e-12);
        prop_assert!((a.adjoint().eval(x) - a.eval(x).adjoint()).norm() < 1e-12);
    }

    #[test]
    fn uniform_fit_recovers_coefficients(a in poly(2, 2)) {
        let grid: Vec<f64> = (0..16).map(|j| 2.0 * std::f64::consts::PI * j as f64 / 16.0).collect();
        let samples: Vec<CMat> = grid.iter().map(|&x| a.eval(x)).collect();
        let fit = TrigPoly::fit_uniform(&samples, 1).unwrap();
        prop_assert!(fit.grid_distance(&a, 32) < 1e-10);
    }

    #[test]
    fn winding_of_diagonal_monomials(k1 in -5i64..=5, k2 in -5i64..=5, phase in 0.0f64..6.3) {
        let d = |k: i64| TrigPoly::monomial(k, CMat::from_element(1, 1, cis(phase)));
        let g = TrigPoly::block_diag(&[d(k1), d(k2)]);
        prop_assert_eq!(winding_number(&g, 1e-9).unwrap(), k1 + k2);
    }
}

#[test]
fn winding_is_additive_under_products() {
    let a = TrigPoly::from_terms(
        1,
        1,
        [(0, CMat::from_element(1, 1, c64(0.3, 0.0))), (2, CMat::from_element(1, 1, c64(1.0, 0.0)))],
    )
    .unwrap();
    let b = TrigPoly::from_terms(
        1,
        1,
        [(-1, CMat::from_element(1, 1, c64(2.0, 0.0))), (0, CMat::from_element(1, 1, c64(0.5, 0.0)))],
    )
    .unwrap();
    let wa = winding_number(&a, 1e-9).unwrap();
    let wb = winding_number(&b, 1e-9).unwrap();
    assert_eq!((wa, wb), (2, -1));
    assert_eq!(winding_number(&a.try_mul(&b).unwrap(), 1e-9).unwrap(), 1);
}

#[test]
fn winding_rejects_degenerate_loops() {
    let through_zero = TrigPoly::from_terms(
        1,
        1,
        [(0, CMat::from_element(1, 1, c64(1.0, 0.0))), (1, CMat::from_element(1, 1, c64(1.0, 0.0)))],
    )
    .unwrap();
    assert!(winding_number(&through_zero, 1e-9).is_err());
}
