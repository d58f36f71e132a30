use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use etaforge_core::circle::{Face, Parity};
use etaforge_core::eta::dimension_functional;
use etaforge_core::index::IndexConfig;
use etaforge_core::numeric::{CMat, DyadicRational, ToleranceConfig};
use etaforge_core::subspaces::{orthocomplement, rotation_homotopy, CoordinateSet, PdoSubspace};
use etaforge_core::suite;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn projection_at(seed: u64, x: f64) -> CMat {
    let mut g = suite::rng(seed, 11);
    let l = suite::generic_framed(&mut g, 3, tol()).unwrap();
    l.symbol().projection().eval(Face::Plus, x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_stays_a_projection(seed in 0u64..500, x in 0.0f64..6.3, phi in 0.0f64..FRAC_PI_2) {
        let p = projection_at(seed, x);
        let q = rotation_homotopy(&p, phi, 1e-6).unwrap();
        prop_assert!((&q * &q - &q).norm() < 1e-12);
        prop_assert!((&q - q.adjoint()).norm() < 1e-12);
        prop_assert!((q.trace().re - 3.0).abs() < 1e-10);
    }

    #[test]
    fn rotation_endpoints(seed in 0u64..500, x in 0.0f64..6.3) {
        let p = projection_at(seed, x);
        let n = p.nrows();
        let start = rotation_homotopy(&p, 0.0, 1e-6).unwrap();
        prop_assert!((start.view((0, 0), (n, n)) - &p).norm() < 1e-12);
        let end = rotation_homotopy(&p, FRAC_PI_2, 1e-6).unwrap();
        prop_assert!((end.view((0, 0), (n, n)) - CMat::identity(n, n)).norm() < 1e-12);
        prop_assert!(end.view((n, n), (n, n)).norm() < 1e-12);
    }

    #[test]
    fn framed_symbols_are_projections(seed in 0u64..500, x in 0.0f64..6.3) {
        let p = projection_at(seed, x);
        prop_assert!((&p * &p - &p).norm() < 1e-10);
    }
}

#[test]
fn rotation_rejects_non_projections() {
    let m = CMat::identity(2, 2) * etaforge_core::numeric::c64(0.5, 0.0);
    assert!(rotation_homotopy(&m, 0.3, 1e-9).is_err());
}

#[test]
fn coordinate_parities() {
    assert_eq!(PdoSubspace::full(2, tol()).parity(), Parity::Even);
    assert_eq!(PdoSubspace::hardy(tol()).parity(), Parity::Odd);
    assert_eq!(suite::mobius_framed(tol()).unwrap().parity(), Parity::Even);
}

#[test]
fn complement_and_double_complement() {
    let cfg = IndexConfig::default();
    let mut g = suite::rng(12, 1);
    for _ in 0..3 {
        let l = Arc::new(suite::even_framed(&mut g, 2, tol()).unwrap());
        let perp = Arc::new(orthocomplement(&l).unwrap());
        let back = Arc::new(orthocomplement(&perp).unwrap());
        let d = dimension_functional(&l, &cfg).unwrap();
        assert_eq!(d + dimension_functional(&perp, &cfg).unwrap(), DyadicRational::ZERO);
        assert_eq!(dimension_functional(&back, &cfg).unwrap(), d);
    }
}

#[test]
fn finite_modifications_shift_d_by_their_size() {
    let cfg = IndexConfig::default();
    let full = Arc::new(PdoSubspace::full(1, tol()));
    assert_eq!(dimension_functional(&full, &cfg).unwrap(), DyadicRational::ZERO);
    for k in 1..=4 {
        let c = CoordinateSet::full(1).with_flips((0..k).map(|m| (m, 0))).unwrap();
        let l = Arc::new(PdoSubspace::coordinate(c, tol()));
        assert_eq!(dimension_functional(&l, &cfg).unwrap(), DyadicRational::integer(-k));
    }
}

#[test]
fn cut_and_framed_mobius_agree_up_to_relative_index() {
    let cfg = IndexConfig::default();
    let framed = Arc::new(suite::mobius_framed(tol()).unwrap());
    let cut = Arc::new(suite::mobius_cut(tol()).unwrap());
    let ind = etaforge_core::index::relative_index(&cut, &framed, &cfg).unwrap();
    let dc = dimension_functional(&cut, &cfg).unwrap();
    let df = dimension_functional(&framed, &cfg).unwrap();
    assert_eq!(dc - df, DyadicRational::integer(ind));
}
