mod common;

use choquet_nash::choquet::{phi_h_discrete, Distortion, DistortionPreset};
use choquet_nash::{build_optimal_quantile, phi_h};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn discrete_regularizer_matches_survival_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in [Distortion::normal(), Distortion::gini()] {
        for _ in 0..200 {
            let law = random_discrete_law(&mut rng, 0.3, 1.7);
            let a = phi_h_discrete(&d, &law);
            let b = phi_discrete_oracle(&d, &law);
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn custom_distortion_recovers_gini() {
    let custom = Distortion::custom("gini-copy", |p| p - p * p, |p| 1.0 - 2.0 * p).unwrap();
    assert!((custom.l2_norm() - Distortion::gini().l2_norm()).abs() < 1e-9);
    let law = build_optimal_quantile(&custom, 0.5, 2.0).unwrap();
    let reference = build_optimal_quantile(&Distortion::gini(), 0.5, 2.0).unwrap();
    for p in [0.01, 0.3, 0.5, 0.77, 0.99] {
        assert!((law.quantile(p) - reference.quantile(p)).abs() < 1e-8);
    }
    assert!((law.density(0.5) - reference.density(0.5)).abs() < 1e-6);
}

#[test]
fn presets_roundtrip_through_names() {
    for p in [DistortionPreset::Normal, DistortionPreset::Gini] {
        assert_eq!(p.build().preset(), Some(p));
    }
}

proptest! {
    #[test]
    fn optimal_law_has_requested_moments(mean in -3.0..3.0f64, std in 0.01..5.0f64, gini in any::<bool>()) {
        let d = if gini { Distortion::gini() } else { Distortion::normal() };
        let law = build_optimal_quantile(&d, mean, std).unwrap();
        let m = choquet_nash::quadrature::integrate_unit(|p| law.quantile(p), 1e-11).unwrap();
        let v = choquet_nash::quadrature::integrate_unit(|p| (law.quantile(p) - mean).powi(2), 1e-11).unwrap();
        prop_assert!((m - mean).abs() < 1e-7);
        prop_assert!((v.sqrt() - std).abs() < 1e-6 * std.max(1.0));
    }

    #[test]
    fn regularizer_is_translation_invariant_and_homogeneous(shift in -5.0..5.0f64, scale in 0.1..4.0f64, seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = random_discrete_law(&mut rng, 0.0, 1.0);
        for d in [Distortion::normal(), Distortion::gini()] {
            let base = phi_h_discrete(&d, &law);
            let moved: Vec<(f64, f64)> = law.iter().map(|&(x, w)| (scale * x + shift, w)).collect();
            prop_assert!((phi_h_discrete(&d, &moved) - scale * base).abs() < 1e-9);
        }
    }

    #[test]
    fn quantile_is_nondecreasing(p in 0.001..0.998f64, gini in any::<bool>()) {
        let d = if gini { Distortion::gini() } else { Distortion::normal() };
        let law = build_optimal_quantile(&d, 0.0, 1.0).unwrap();
        prop_assert!(law.quantile(p + 0.001) >= law.quantile(p));
    }

    #[test]
    fn optimum_attains_norm(mean in -2.0..2.0f64, std in 0.05..3.0f64) {
        for d in [Distortion::normal(), Distortion::gini()] {
            let law = build_optimal_quantile(&d, mean, std).unwrap();
            let phi = phi_h(&d, |p| law.quantile(p)).unwrap();
            prop_assert!((phi - std * d.l2_norm()).abs() < 1e-8);
            prop_assert!((law.phi() - std * d.l2_norm()).abs() < 1e-15);
        }
    }
}
