use etaforge_core::circle::{CircleOperator, CircleSymbol, Face, Window};
use etaforge_core::numeric::{c64, CMat, TrigPoly};
use etaforge_core::suite;
use proptest::prelude::*;

fn random_pdo(seed: u64, r: usize) -> CircleOperator {
    let mut g = suite::rng(seed, 7);
    let sym = suite::elliptic_symbol(&mut g, r, 2);
    CircleOperator::pdo(sym).plus(CircleOperator::Local(suite::finite_block(&mut g, 2, r, r, 0.5)))
}

#[test]
fn exponential_is_the_shift() {
    let op = CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(2)));
    let w = Window::symmetric(5);
    let m = op.matrix(w, w);
    for j in w.modes() {
        for i in w.modes() {
            let want = if i == j + 2 { 1.0 } else { 0.0 };
            assert_eq!(m[(w.offset(i, 1), w.offset(j, 1))], c64(want, 0.0));
        }
    }
}

#[test]
fn hardy_symbol_projects_positive_modes() {
    let op = CircleOperator::pdo(CircleSymbol::hardy(1));
    let w = Window::symmetric(4);
    let m = op.matrix(w, w);
    for n in w.modes() {
        let want = if n >= 0 { 1.0 } else { 0.0 };
        assert_eq!(m[(w.offset(n, 1), w.offset(n, 1))], c64(want, 0.0));
        assert_eq!(Face::of_mode(n) == Face::Plus, n >= 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_matrix_is_conjugate_transpose(seed in 0u64..1000, r in 1usize..=3) {
        let op = random_pdo(seed, r);
        let w = Window::symmetric(6);
        let a = op.clone().adjoint().matrix(w, w);
        prop_assert!((a - op.matrix(w, w).adjoint()).norm() < 1e-12);
    }

    #[test]
    fn composition_is_matrix_product(s1 in 0u64..1000, s2 in 0u64..1000, r in 1usize..=2) {
        let (a, b) = (random_pdo(s1, r), random_pdo(s2, r));
        let w = Window::symmetric(5);
        let inner = w.expand(b.bandwidth());
        let direct = a.matrix(w, inner) * b.matrix(inner, w);
        prop_assert!((a.compose(b).matrix(w, w) - direct).norm() < 1e-10);
    }

    #[test]
    fn principal_symbol_ignores_smoothing(seed in 0u64..1000) {
        let mut g = suite::rng(seed, 8);
        let sym = suite::elliptic_symbol(&mut g, 2, 1);
        let op = CircleOperator::pdo(sym.clone()).plus(CircleOperator::Local(suite::finite_block(&mut g, 3, 2, 2, 1.0)));
        prop_assert!(op.principal_symbol().unwrap().grid_distance(&sym, 32) < 1e-12);
    }

    #[test]
    fn antipodal_swaps_faces(seed in 0u64..1000, x in 0.0f64..6.3) {
        let mut g = suite::rng(seed, 9);
        let s = suite::elliptic_symbol(&mut g, 2, 1);
        let a = s.antipodal();
        prop_assert!((a.eval(Face::Plus, x) - s.eval(Face::Minus, x)).norm() < 1e-14);
        prop_assert!((a.eval(Face::Minus, x) - s.eval(Face::Plus, x)).norm() < 1e-14);
    }
}

#[test]
fn shape_mismatch_is_rejected() {
    let a = TrigPoly::constant(CMat::identity(2, 2));
    let b = TrigPoly::constant(CMat::identity(3, 3));
    assert!(CircleSymbol::new(0, a, b).is_err());
}
