//! Closed-form Mellin transforms against quadrature, the power rule and the
//! Mellin convolution.

use num_complex::Complex64;
use selfdecomp::distributions::DistributionSpec;
use selfdecomp::mellin::{
    analytic_mellin, mellin_convolve, mellin_of_power, numeric_mellin, strip_of, PowerDensity,
    QuadratureConfig,
};
use selfdecomp::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn families() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::exponential(),
        DistributionSpec::gamma(0.5).unwrap(),
        DistributionSpec::gamma(2.5).unwrap(),
        DistributionSpec::weibull(0.7).unwrap(),
        DistributionSpec::weibull(2.0).unwrap(),
        DistributionSpec::one_sided_stable(0.5).unwrap(),
        DistributionSpec::m_wright(0.3).unwrap(),
        DistributionSpec::m_wright(0.8).unwrap(),
        DistributionSpec::foxh_residual(0.5, 0.3).unwrap(),
        DistributionSpec::foxh_residual(2.5, 0.7).unwrap(),
        DistributionSpec::gaussian_residual(0.3).unwrap(),
        DistributionSpec::gaussian_residual(0.7).unwrap(),
        DistributionSpec::half_normal(),
    ]
}

#[test]
fn quadrature_matches_closed_forms() {
    let cfg = QuadratureConfig::default();
    for spec in families() {
        let strip = strip_of(spec);
        let lo = if strip.lower.is_finite() {
            strip.lower
        } else {
            0.0
        };
        let mut zs = vec![c(1.0, 0.0), c(lo + 0.6, 0.0), c(lo + 0.9, 1.5)];
        if strip.upper.is_finite() {
            zs.retain(|z| strip.contains(z.re));
            zs.push(c(0.5 * (1.0 + strip.upper), -0.7));
        } else {
            zs.push(c(3.0, 0.0));
        }
        for z in zs {
            let exact = analytic_mellin(spec, z).unwrap().value;
            let num = numeric_mellin(&spec, z, strip, &cfg).unwrap();
            let rel = (num.value - exact).norm() / exact.norm();
            assert!(
                rel < 1e-6,
                "{spec} at z = {z}: {} vs {exact}, rel {rel:e}",
                num.value
            );
        }
    }
}

#[test]
fn every_density_is_normalized() {
    for spec in families() {
        let v = analytic_mellin(spec, c(1.0, 0.0)).unwrap().value;
        assert!((v - 1.0).norm() < 1e-14, "{spec}: {v}");
    }
}

#[test]
fn power_rule_reproduces_weibull() {
    // Y0^{1/k} is Weibull(k)
    for &k in &[0.4, 1.0, 2.5] {
        let w = DistributionSpec::weibull(k).unwrap();
        for z in [c(1.0, 0.0), c(1.7, 0.3), c(4.0, -2.0)] {
            let a = analytic_mellin(w, z).unwrap().value;
            let b = mellin_of_power(DistributionSpec::exponential(), 1.0 / k, z)
                .unwrap()
                .value;
            assert!((a - b).norm() <= 1e-14 * a.norm(), "k={k} z={z}");
        }
    }
}

#[test]
fn power_density_quadrature_matches_power_rule() {
    let spec = DistributionSpec::m_wright(0.5).unwrap();
    let a = 0.6;
    let pd = PowerDensity::new(spec, a).unwrap();
    let strip = strip_of(spec).pulled_back(a);
    for z in [c(1.0, 0.0), c(2.0, 0.0), c(0.5, 1.0)] {
        let exact = mellin_of_power(spec, a, z).unwrap().value;
        let num = numeric_mellin(&pd, z, strip, &QuadratureConfig::default())
            .unwrap()
            .value;
        assert!(
            (num - exact).norm() < 1e-7 * exact.norm(),
            "z={z}: {num} vs {exact}"
        );
    }
}

#[test]
fn convolution_of_m_wright_and_weibull_is_exponential() {
    // Y0 = Y0^β · Y_β, and Y0^β is Weibull(1/β)
    let cfg = QuadratureConfig::default();
    for &b in &[0.2, 0.5, 0.8] {
        let mw = DistributionSpec::m_wright(b).unwrap();
        let wb = DistributionSpec::weibull(1.0 / b).unwrap();
        for x in [0.01f64, 0.3, 1.0, 4.0, 10.0] {
            let v = mellin_convolve(&wb, &mw, x, &cfg).unwrap();
            assert!((v - (-x).exp()).abs() < 1e-7, "β={b} x={x}: {v}");
        }
    }
}

#[test]
fn foxh_residual_is_normalized_in_closed_form() {
    let v = analytic_mellin(
        DistributionSpec::foxh_residual(2.0, 0.5).unwrap(),
        c(1.0, 0.0),
    )
    .unwrap();
    assert_eq!(v.value, c(1.0, 0.0));
}

#[test]
fn outside_the_strip_is_an_error() {
    let g = DistributionSpec::gamma(0.5).unwrap();
    assert!(matches!(
        analytic_mellin(g, c(0.4, 0.0)),
        Err(Error::StripViolation { .. })
    ));
    let s = DistributionSpec::one_sided_stable(0.5).unwrap();
    assert!(analytic_mellin(s, c(1.6, 0.0)).is_err());
    assert!(analytic_mellin(s, c(-3.0, 0.0)).is_ok());
    assert!(mellin_of_power(g, -1.0, c(1.0, 0.0)).is_err());
}
