use std::sync::Arc;

use etaforge_core::circle::{CircleOperator, CircleSymbol};
use etaforge_core::index::{
    analytic_index, analytic_index_report, index_at, relative_index, IndexConfig, SubspaceOperator,
};
use etaforge_core::numeric::ToleranceConfig;
use etaforge_core::subspaces::{image_subspace, PdoSubspace};
use etaforge_core::suite;
use etaforge_core::Error;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn toeplitz(k: i64, from: i64) -> SubspaceOperator {
    let h = Arc::new(PdoSubspace::hardy_from(from, tol()));
    let op = CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(k)));
    SubspaceOperator::new(op, h.clone(), h).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn toeplitz_index_is_minus_winding(k in -6i64..=6, from in -3i64..=3) {
        prop_assert_eq!(analytic_index(&toeplitz(k, from), &IndexConfig::default()).unwrap(), -k);
    }

    #[test]
    fn relative_index_is_a_cocycle(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4) {
        let cfg = IndexConfig::default();
        let h = |k| Arc::new(PdoSubspace::hardy_from(k, tol()));
        let ab = relative_index(&h(a), &h(b), &cfg).unwrap();
        let bc = relative_index(&h(b), &h(c), &cfg).unwrap();
        let ac = relative_index(&h(a), &h(c), &cfg).unwrap();
        prop_assert_eq!(ab, b - a);
        prop_assert_eq!(ab + bc, ac);
    }

    #[test]
    fn index_is_additive_under_composition(k1 in -3i64..=3, k2 in -3i64..=3) {
        let cfg = IndexConfig::default();
        let first = toeplitz(k1, 0);
        let exp = CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(k2)));
        let second = SubspaceOperator::new(exp, first.target().clone(), first.target().clone()).unwrap();
        let d = first.then(&second).unwrap();
        prop_assert_eq!(analytic_index(&d, &cfg).unwrap(), -k1 - k2);
    }
}

#[test]
fn index_is_stable_across_truncations() {
    let d = toeplitz(2, 0);
    let report = analytic_index_report(&d, &IndexConfig::default()).unwrap();
    assert_eq!(report.scales.iter().map(|s| s.0).collect::<Vec<_>>(), [32, 64, 96]);
    assert!(report.scales.iter().all(|s| s.1 == -2));
    for n in [16, 20, 40, 50] {
        assert_eq!(index_at(&d, n, 1e-6).unwrap(), -2);
    }
}

#[test]
fn invertible_even_operators_have_index_zero() {
    let mut g = suite::rng(5, 3);
    for _ in 0..3 {
        let l = Arc::new(suite::generic_framed(&mut g, 2, tol()).unwrap());
        let u = suite::even_invertible(&mut g, 2, tol()).unwrap();
        let image = Arc::new(image_subspace(&l, &u).unwrap());
        let d = SubspaceOperator::new(u.operator(), l, image).unwrap();
        assert_eq!(analytic_index(&d, &IndexConfig::default()).unwrap(), 0);
    }
}

#[test]
fn smoothing_perturbations_keep_the_index() {
    let mut g = suite::rng(6, 3);
    let cfg = IndexConfig::default();
    for n in [2u64, 3] {
        let d = suite::modn_operator(&mut g, n, tol()).unwrap();
        let base = analytic_index(d.operator(), &cfg).unwrap();
        let inner = d.operator().operator();
        let p = suite::perturbation(&mut g, inner.rows_rank(), inner.cols_rank());
        let moved = d.operator().with_operator(inner.clone().plus(p)).unwrap();
        assert_eq!(analytic_index(&moved, &cfg).unwrap(), base);
    }
}

#[test]
fn non_elliptic_operators_are_refused() {
    let h = Arc::new(PdoSubspace::hardy(tol()));
    let zero = CircleOperator::pdo(CircleSymbol::zero(1, 1, 0));
    let d = SubspaceOperator::new(zero, h.clone(), h).unwrap();
    assert!(matches!(analytic_index(&d, &IndexConfig::default()), Err(Error::Precondition(_))));
}

#[test]
fn relative_index_needs_equal_symbols() {
    let h = Arc::new(PdoSubspace::hardy(tol()));
    let full = Arc::new(PdoSubspace::full(1, tol()));
    assert!(relative_index(&h, &full, &IndexConfig::default()).is_err());
}
