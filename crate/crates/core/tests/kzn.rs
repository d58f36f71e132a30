use std::sync::Arc;

use etaforge_core::circle::CircleSymbol;
use etaforge_core::index::IndexConfig;
use etaforge_core::kzn::{
    bockstein, difference_construction_zn, direct_image_s1, gamma_trivialization, mod_n_analytic_index, moore_k,
    reduction_mod_n, shift_generator, winding_datum, KClassZn,
};
use etaforge_core::numeric::ToleranceConfig;
use etaforge_core::subspaces::PdoSubspace;
use etaforge_core::suite;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn class(n: u64) -> impl Strategy<Value = KClassZn> {
    (-50i64..50, -50i64..50).prop_map(move |(f, t)| KClassZn::new(n, f, t).unwrap())
}

proptest! {
    #[test]
    fn classes_form_a_group((n, a, b, c) in (2u64..9).prop_flat_map(|n| (Just(n), class(n), class(n), class(n)))) {
        let zero = KClassZn::zero(n).unwrap();
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a + zero, a);
        prop_assert_eq!(a + (-a), zero);
    }

    #[test]
    fn reductions_have_no_bockstein(free in -100i64..100, n in 2u64..12) {
        prop_assert_eq!(bockstein(&reduction_mod_n(free, n).unwrap()), 0);
    }

    #[test]
    fn torsion_generator_has_order_n(n in 2u64..12) {
        let m = moore_k(n).unwrap();
        prop_assert_eq!(m.generator_order(), n);
        prop_assert_eq!(bockstein(&m.torsion_generator()), 1);
    }

    #[test]
    fn winding_datum_is_additive(seed in 0u64..300) {
        let mut g = suite::rng(seed, 21);
        let a = suite::elliptic_symbol(&mut g, 1, 2);
        let b = suite::elliptic_symbol(&mut g, 2, 2);
        let sum = CircleSymbol::block_diag(&[a.clone(), b.clone()]).unwrap();
        let w = |s: &CircleSymbol, r| winding_datum(s, &PdoSubspace::full(r, tol()), 1, 1e-6).unwrap();
        prop_assert_eq!(w(&sum, 3), w(&a, 1) + w(&b, 2));
    }
}

#[test]
fn mixed_moduli_do_not_add() {
    let a = KClassZn::new(2, 0, 1).unwrap();
    let b = KClassZn::new(3, 0, 1).unwrap();
    assert!(a.try_add(&b).is_err());
    assert!(KClassZn::new(1, 0, 0).is_err());
    assert!(moore_k(1).is_err());
}

#[test]
fn shift_generator_has_unit_direct_image() {
    let cfg = IndexConfig::default();
    for n in [2u64, 3, 5] {
        let d = shift_generator(n, tol()).unwrap();
        let image = direct_image_s1(&d.class(1e-6).unwrap()).unwrap();
        assert_eq!(image, mod_n_analytic_index(&d, &cfg).unwrap());
        assert!(image != 0);
    }
}

#[test]
fn gamma_path_keeps_its_winding() {
    for n in 2..=6 {
        let path = gamma_trivialization(n).unwrap();
        assert!(path.windings.iter().all(|&w| w == n as i64));
        assert!(path.min_det > 0.0);
    }
}

#[test]
fn trivial_summands_do_not_change_the_residue() {
    let cfg = IndexConfig::default();
    let mut g = suite::rng(3, 22);
    let d = suite::modn_operator(&mut g, 3, tol()).unwrap();
    let before = mod_n_analytic_index(&d, &cfg).unwrap();
    let full = Arc::new(PdoSubspace::full(1, tol()));
    let shift = etaforge_core::index::SubspaceOperator::new(
        etaforge_core::circle::CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(1))),
        full.clone(),
        full,
    )
    .unwrap();
    let bigger = d.with_trivial(&shift).unwrap();
    assert_eq!(mod_n_analytic_index(&bigger, &cfg).unwrap(), before);
    let c = difference_construction_zn(&d.operator().symbol().unwrap(), d.base(), 3, 1e-6).unwrap();
    assert_eq!(direct_image_s1(&c).unwrap(), before);
}
