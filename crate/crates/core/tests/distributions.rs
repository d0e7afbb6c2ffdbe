//! Samplers against their densities, inverse-CDF tables, and the
//! non-negativity of every density.

use proptest::prelude::*;
use selfdecomp::distributions::{
    build_inverse_cdf_table, cdf_numeric, load_table, pdf, read_samples_csv, sample,
    sample_half_normal, sample_with, save_table, write_samples_csv, DistributionSpec,
    HalfNormalMethod, TableStore,
};
use selfdecomp::mellin::QuadratureConfig;
use selfdecomp::verify::{ks_statistic, ks_test};
use selfdecomp::Error;

const N: usize = 20_000;

/// KS distance between a sample and a law, using the numerical CDF at the
/// sample points (one-sample statistic).
fn one_sample_ks(spec: DistributionSpec, seed: u64) -> f64 {
    let mut v = sample(spec, N, seed).unwrap().values;
    v.sort_by(f64::total_cmp);
    let cfg = QuadratureConfig::default();
    let n = v.len() as f64;
    // evaluate the CDF on a thinned set of order statistics to keep it quick
    (0..v.len())
        .step_by(97)
        .map(|i| {
            let f = cdf_numeric(spec, v[i], &cfg).unwrap();
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn samplers_follow_their_densities() {
    // 1.628 / sqrt(N) is the 1 % critical value of the full statistic
    let crit = 1.628 / (N as f64).sqrt();
    let specs = [
        DistributionSpec::exponential(),
        DistributionSpec::gamma(0.5).unwrap(),
        DistributionSpec::gamma(2.5).unwrap(),
        DistributionSpec::weibull(0.7).unwrap(),
        DistributionSpec::m_wright(0.3).unwrap(),
        DistributionSpec::m_wright(0.8).unwrap(),
        DistributionSpec::foxh_residual(1.0, 0.7).unwrap(),
        DistributionSpec::gaussian_residual(0.5).unwrap(),
        DistributionSpec::half_normal(),
    ];
    for (i, spec) in specs.into_iter().enumerate() {
        if spec.needs_table() {
            TableStore::global()
                .get_or_build(spec, 1024, &QuadratureConfig::default())
                .unwrap();
        }
        let d = one_sample_ks(spec, 10 + i as u64);
        assert!(d < crit, "{spec}: D = {d} >= {crit}");
    }
}

#[test]
fn residual_sampling_needs_a_table() {
    let store = TableStore::new();
    let spec = DistributionSpec::foxh_residual(0.7, 0.4).unwrap();
    assert!(matches!(
        sample_with(spec, 10, 1, &store),
        Err(Error::TableUnavailable(_))
    ));
    store
        .get_or_build(spec, 64, &QuadratureConfig::default())
        .unwrap();
    assert_eq!(sample_with(spec, 10, 1, &store).unwrap().len(), 10);
}

#[test]
fn weibull_is_a_power_of_the_exponential() {
    let k = 0.4;
    let e: Vec<f64> = sample(DistributionSpec::exponential(), N, 1)
        .unwrap()
        .values
        .iter()
        .map(|x| x.powf(1.0 / k))
        .collect();
    let w = sample(DistributionSpec::weibull(k).unwrap(), N, 2)
        .unwrap()
        .values;
    assert!(ks_test("weibull", &e, &w, 0.01).unwrap().pass);
}

#[test]
fn m_wright_one_half_is_half_gaussian_with_variance_two() {
    // M_{1/2}(t) = e^{-t²/4}/√π is the law of √2 |U|
    let m = sample(DistributionSpec::m_wright(0.5).unwrap(), N, 3)
        .unwrap()
        .values;
    let h: Vec<f64> = sample(DistributionSpec::half_normal(), N, 4)
        .unwrap()
        .values
        .iter()
        .map(|x| x * 2f64.sqrt())
        .collect();
    assert!(ks_test("m_wright_half", &m, &h, 0.01).unwrap().pass);
}

#[test]
fn half_normal_constructions_agree() {
    let a = sample_half_normal(N, 5, HalfNormalMethod::Fold).unwrap();
    let b = sample_half_normal(N, 6, HalfNormalMethod::Gamma).unwrap();
    assert!(
        ks_test("half_normal", &a.values, &b.values, 0.01)
            .unwrap()
            .pass
    );
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    let spec = DistributionSpec::m_wright(0.4).unwrap();
    assert_eq!(
        sample(spec, 1000, 9).unwrap().values,
        sample(spec, 1000, 9).unwrap().values
    );
    assert_ne!(
        sample(spec, 1000, 9).unwrap().values,
        sample(spec, 1000, 10).unwrap().values
    );
}

#[test]
fn table_quantiles_invert_the_cdf() {
    let cfg = QuadratureConfig::default();
    for spec in [
        DistributionSpec::foxh_residual(2.5, 0.3).unwrap(),
        DistributionSpec::gaussian_residual(0.7).unwrap(),
    ] {
        let t = build_inverse_cdf_table(spec, 512, &cfg).unwrap();
        for &p in &[1e-4, 0.01, 0.2, 0.5, 0.77, 0.99, 0.9999] {
            let q = t.quantile(p);
            let f = cdf_numeric(spec, q, &cfg).unwrap();
            assert!((f - p).abs() < 1e-6, "{spec}: cdf(quantile({p})) = {f}");
        }
    }
}

#[test]
fn table_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = DistributionSpec::foxh_residual(1.0, 0.3).unwrap();
    let t = build_inverse_cdf_table(spec, 64, &QuadratureConfig::default()).unwrap();
    let path = dir.path().join("t.csv");
    save_table(&t, &path).unwrap();
    let back = load_table(&path).unwrap();
    assert_eq!(back.spec(), spec);
    assert_eq!(back.quantiles(), t.quantiles());
    assert_eq!(back.probabilities(), t.probabilities());

    // a store with a cache directory writes the file and re-reads it
    let store = TableStore::with_cache_dir(dir.path());
    let a = store
        .get_or_build(spec, 64, &QuadratureConfig::default())
        .unwrap();
    assert!(dir.path().join(TableStore::file_name(spec, 64)).exists());
    let fresh = TableStore::with_cache_dir(dir.path());
    let b = fresh
        .get_or_build(spec, 64, &QuadratureConfig::default())
        .unwrap();
    assert_eq!(a.quantiles(), b.quantiles());
}

#[test]
fn sample_files_round_trip() {
    let v = sample(DistributionSpec::gamma(0.5).unwrap(), 500, 7)
        .unwrap()
        .values;
    let mut buf = Vec::new();
    write_samples_csv(&mut buf, &v).unwrap();
    let back = read_samples_csv(buf.as_slice()).unwrap();
    assert_eq!(back, v);
    assert_eq!(ks_statistic(&v, &back).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn densities_are_nonnegative_and_finite(
        b in 0.05f64..0.95,
        r in 0.2f64..4.0,
        x in 1e-3f64..60.0,
    ) {
        for spec in [
            DistributionSpec::m_wright(b).unwrap(),
            DistributionSpec::foxh_residual(r, b).unwrap(),
            DistributionSpec::gaussian_residual(b).unwrap(),
            DistributionSpec::one_sided_stable(b).unwrap(),
            DistributionSpec::gamma(r).unwrap(),
        ] {
            let v = pdf(spec, x).unwrap();
            prop_assert!(v >= 0.0 && v.is_finite(), "{} at {}: {}", spec, x, v);
        }
    }

    #[test]
    fn samples_are_positive(b in 0.05f64..0.95, seed in 0u64..1000) {
        let v = sample(DistributionSpec::m_wright(b).unwrap(), 200, seed).unwrap().values;
        prop_assert!(v.iter().all(|x| *x >= 0.0 && x.is_finite()));
    }
}
