use etaforge_core::eta::{eta_closed_form, eta_numeric, heat_sum, HeatScheme, SpectrumModel};
use etaforge_core::torus::{forms_eta, t3_spectrum, TwistCharacter};
use etaforge_core::Execution;
use proptest::prelude::*;

fn numeric(model: &SpectrumModel, lambda: f64) -> f64 {
    eta_numeric(model, &HeatScheme::for_model(model, lambda), Execution::Sequential).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arithmetic_progression_is_antisymmetric(theta in 0.02f64..0.98) {
        let a = numeric(&SpectrumModel::arithmetic(theta, 1).unwrap(), 2000.0);
        let b = numeric(&SpectrumModel::arithmetic(1.0 - theta, 1).unwrap(), 2000.0);
        prop_assert!((a + b).abs() < 1e-9);
        prop_assert!((a - (1.0 - 2.0 * theta)).abs() < 1e-6);
    }

    #[test]
    fn multiplicity_scales_eta(theta in 0.05f64..0.95, m in 1u32..4) {
        let one = numeric(&SpectrumModel::arithmetic(theta, 1).unwrap(), 1000.0);
        let many = numeric(&SpectrumModel::arithmetic(theta, m).unwrap(), 1000.0);
        prop_assert!((many - m as f64 * one).abs() < 1e-8);
    }

    #[test]
    fn finite_spectra_count_signs(values in proptest::collection::vec((-50.0f64..50.0, 1u64..4), 1..12)) {
        let values: Vec<(f64, u64)> = values.into_iter().filter(|(v, _)| v.abs() > 0.5).collect();
        prop_assume!(!values.is_empty());
        let signed: i64 = values.iter().map(|&(v, m)| if v > 0.0 { m as i64 } else { -(m as i64) }).sum();
        // the heat scale has to resolve the whole finite list
        let lambda = 1000.0 * values.iter().fold(0.0f64, |a, (v, _)| a.max(v.abs()));
        let model = SpectrumModel::explicit(values).unwrap();
        prop_assert!((numeric(&model, lambda) - signed as f64).abs() < 1e-8);
    }

    #[test]
    fn torus_spectrum_has_two_to_one_signs(t1 in 0.0f64..1.0, t2 in 0.0f64..1.0, t3 in 0.0f64..1.0) {
        let twist = TwistCharacter::new([t1, t2, t3]).unwrap();
        let s = t3_spectrum(8.0, twist, Execution::Sequential).unwrap();
        prop_assert_eq!(s.negative_count(), 2 * s.positive_count());
    }
}

#[test]
fn closed_form_matches_known_values() {
    for (theta, want) in [(0.1, 0.8), (0.25, 0.5), (0.5, 0.0), (0.9, -0.8)] {
        let v = eta_closed_form(&SpectrumModel::arithmetic(theta, 1).unwrap()).unwrap().value;
        assert!((v - want).abs() < 1e-15);
    }
    // integer shifts leave a kernel, counted with weight one
    let zero = eta_closed_form(&SpectrumModel::arithmetic(0.0, 1).unwrap()).unwrap();
    assert_eq!(zero.kernel_dim, 1);
}

#[test]
fn untwisted_torus_eta_counts_the_kernel() {
    let g = forms_eta(TwistCharacter::trivial(), 16.0, 1e-2, Execution::Sequential).unwrap();
    assert!((g.numeric.value - g.closed_form.value).abs() < 1e-6);
    assert!(g.fractional.is_integer());
}

#[test]
fn heat_sums_agree_across_execution_policies() {
    let model = SpectrumModel::lattice([0.3, 0.1, 0.7], 20.0).unwrap();
    let levels = model.signed_levels(20.0, Execution::Sequential);
    for t in [1e-3, 1e-2, 0.1] {
        let s = heat_sum(&levels, t, Execution::Sequential);
        let p = heat_sum(&levels, t, Execution::Parallel);
        assert_eq!(s.to_bits(), p.to_bits());
    }
}

#[test]
fn invalid_models_are_rejected() {
    assert!(SpectrumModel::arithmetic(f64::NAN, 1).is_err());
    assert!(SpectrumModel::lattice([0.0; 3], 1.5).is_err());
    assert!(TwistCharacter::new([f64::INFINITY, 0.0, 0.0]).is_err());
}
