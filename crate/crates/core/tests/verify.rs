//! The verification layer end to end: decompositions, Laplace pairs,
//! orbits, the β → 0 limit, the KS null behaviour and the guard against
//! false positives.

use num_complex::Complex64;
use selfdecomp::distributions::{sample, DistributionSpec};
use selfdecomp::verify::{
    aggregate, all_pass, characterization_iteration, ks_test, laplace_pair_check,
    limit_beta_zero_check, verify_characterization, verify_exponential_decomposition,
    verify_gamma_decomposition, verify_gamma_decomposition_with_residual,
    verify_gaussian_decomposition, CharacterizationKind, VerificationReport, VerifyConfig,
};

fn analytic_only() -> VerifyConfig {
    VerifyConfig {
        skip_monte_carlo: true,
        ..VerifyConfig::default()
    }
}

fn assert_pass(r: &VerificationReport) {
    assert!(r.pass, "{}", serde_json::to_string_pretty(r).unwrap());
}

#[test]
fn exponential_decompositions_pass() {
    let cfg = VerifyConfig::default();
    let reports: Vec<_> = [0.2, 0.5, 0.8]
        .iter()
        .map(|&b| verify_exponential_decomposition(b, &cfg).unwrap())
        .collect();
    for r in &reports {
        assert_pass(r);
        for name in ["registry", "convolution", "ks"] {
            assert_eq!(r.sub_check_passed(name), Some(true), "{} {name}", r.test_id);
        }
    }
    assert!(all_pass(&reports));
}

#[test]
fn gamma_decompositions_pass_analytically() {
    let cfg = analytic_only();
    for &r in &[0.5, 1.0, 2.5] {
        for &a in &[0.3, 0.7] {
            let rep = verify_gamma_decomposition(r, a, &cfg).unwrap();
            assert_pass(&rep);
            assert_eq!(rep.sub_check("ks"), None);
        }
    }
}

#[test]
fn gamma_decomposition_passes_the_law_check() {
    let cfg = VerifyConfig {
        skip_analytic: true,
        ..VerifyConfig::default()
    };
    let rep = verify_gamma_decomposition(1.0, 0.3, &cfg).unwrap();
    assert_pass(&rep);
}

#[test]
fn mismatched_residual_fails_every_sub_check() {
    // Fox H residual built for r' = r + 0.5 instead of r
    let (r, a) = (2.5, 0.7);
    let wrong = DistributionSpec::foxh_residual(r + 0.5, a).unwrap();
    let rep =
        verify_gamma_decomposition_with_residual(r, a, wrong, &VerifyConfig::default()).unwrap();
    assert!(!rep.pass);
    for name in ["registry", "convolution", "ks"] {
        assert_eq!(
            rep.sub_check_passed(name),
            Some(false),
            "{name} should fail"
        );
    }
}

#[test]
fn gaussian_decompositions_pass() {
    let cfg = VerifyConfig::default();
    for &a in &[0.3, 0.5, 0.7] {
        let r = verify_gaussian_decomposition(a, &cfg).unwrap();
        assert_pass(&r);
        for name in [
            "registry",
            "density_forms",
            "numeric_mellin",
            "normalization",
            "ks",
        ] {
            assert_eq!(r.sub_check_passed(name), Some(true), "{} {name}", r.test_id);
        }
    }
}

#[test]
fn laplace_pairs_hold() {
    let cfg = VerifyConfig::default();
    for &b in &[0.2, 0.3, 0.5, 0.7, 0.8] {
        assert_pass(&laplace_pair_check(b, &[0.5, 1.0, 2.0], &cfg).unwrap());
    }
    assert_pass(&laplace_pair_check(1.0, &[0.5, 2.0], &cfg).unwrap());
}

#[test]
fn characterization_orbits_contract_and_keep_h_constant() {
    let cfg = VerifyConfig::default();
    let kinds = [
        CharacterizationKind::Exponential { beta: 0.3 },
        CharacterizationKind::Gamma { r: 2.5, alpha: 0.7 },
        CharacterizationKind::Gamma { r: 0.5, alpha: 0.3 },
        CharacterizationKind::Gaussian { alpha: 0.5 },
    ];
    for kind in kinds {
        for z0 in [Complex64::new(3.0, 0.0), Complex64::new(2.0, 1.5)] {
            assert_pass(&verify_characterization(kind, z0, 40, &cfg).unwrap());
        }
    }
    let t = characterization_iteration(
        CharacterizationKind::Gaussian { alpha: 0.3 },
        Complex64::new(5.0, -2.0),
        60,
    )
    .unwrap();
    let last = t.h_values.last().unwrap();
    assert!((last.re - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
}

#[test]
fn m_wright_approaches_the_exponential_as_beta_vanishes() {
    let r = limit_beta_zero_check(&[0.4, 0.2, 0.1, 0.05], 100_000, 1).unwrap();
    assert_pass(&r);
    assert_eq!(r.metric, 0.0);
    assert!(limit_beta_zero_check(&[0.2, 0.4], 1000, 1).is_err());
}

#[test]
fn ks_rarely_rejects_two_exponential_batches() {
    // at the 1 % level, 5 or more rejections in 50 runs has probability 2e-4
    let failures = (0..50u64)
        .filter(|&s| {
            let a = sample(DistributionSpec::exponential(), 100_000, 2 * s + 1000).unwrap();
            let b = sample(DistributionSpec::exponential(), 100_000, 2 * s + 1001).unwrap();
            !ks_test("null", &a.values, &b.values, 0.01).unwrap().pass
        })
        .count();
    println!("two-sample KS under the null: {failures} of 50 rejected");
    assert!(failures <= 4, "{failures} of 50 rejected");
}

#[test]
fn ks_rejection_rate_matches_the_level() {
    let trials = 20_000u64;
    let rejected = (0..trials)
        .filter(|&s| {
            let a = sample(DistributionSpec::exponential(), 1000, 2 * s + 7).unwrap();
            let b = sample(DistributionSpec::exponential(), 1000, 2 * s + 8).unwrap();
            !ks_test("null", &a.values, &b.values, 0.01).unwrap().pass
        })
        .count();
    let rate = rejected as f64 / trials as f64;
    assert!((0.006..0.014).contains(&rate), "rejection rate {rate}");
}

#[test]
fn reports_serialize_and_aggregate_in_order() {
    let cfg = analytic_only();
    let reports = aggregate(vec![
        verify_exponential_decomposition(0.8, &cfg).unwrap(),
        verify_exponential_decomposition(0.2, &cfg).unwrap(),
    ]);
    assert!(reports[0].test_id < reports[1].test_id);
    let text = serde_json::to_string(&reports[0]).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.test_id, reports[0].test_id);
    assert_eq!(back.pass, reports[0].pass);
}

#[test]
fn unsupported_orders_are_rejected() {
    let cfg = analytic_only();
    assert!(verify_exponential_decomposition(0.01, &cfg).is_err());
    assert!(verify_gaussian_decomposition(0.99, &cfg).is_err());
}
