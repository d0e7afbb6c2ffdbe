//! Mittag-Leffler functions on the negative real axis, E_{α,μ}(-s).
//!
//! For 0 < α < 1 and 0 < μ < 1 + α the Hankel representation of
//! E_{α,μ} collapses onto the cut:
//!
//! ```text
//! E_{α,μ}(-s) = (1/π) ∫_0^∞ e^{-ρ} ρ^{α-μ}
//!               [ρ^α sin(π(1-μ)) + s sin(π(1+α-μ))] / (ρ^{2α} + 2ρ^α s cos(πα) + s²) dρ.
//! ```
//!
//! Larger μ are brought into range with E_{α,μ+α}(-s) = (1/Γ(μ) - E_{α,μ}(-s)) / s,
//! which only divides errors by s on this branch (s > 1).

use std::f64::consts::PI;

use super::gamma::rgamma;
use super::series::{sum_series, GammaSeriesTerms, SeriesOutcome};
use super::SeriesConfig;
use crate::error::{Error, Result};
use crate::quad::{exp_sinh, gauss_kronrod, Tolerance};

const TOL: Tolerance = Tolerance::new(0.0, 1e-14, 10);
const ACCEPT: f64 = 1e-11;

fn check_accuracy(value: f64, error: f64, what: &str) -> Result<f64> {
    if !value.is_finite() || error > ACCEPT * value.abs().max(1e-16) {
        return Err(Error::Quadrature(format!(
            "{what}: value {value:e}, error estimate {error:e}"
        )));
    }
    Ok(value)
}

/// Collapsed-Hankel integral for 0 < α < 1 and μ < 1 + α, after the
/// substitution ρ = v^{1/p}, p = 1 + α - μ, that removes the ρ^{α-μ}
/// endpoint singularity.
fn ml_cut_integral(alpha: f64, mu: f64, s: f64) -> Result<f64> {
    let p = 1.0 + alpha - mu;
    let sin_a = (PI * (1.0 - mu)).sin();
    let sin_b = (PI * p).sin();
    let cos_pa = (PI * alpha).cos();
    let integrand = |v: f64| -> f64 {
        let rho = v.powf(1.0 / p);
        if rho > 745.0 {
            return 0.0;
        }
        let ra = rho.powf(alpha);
        let den = ra * ra + 2.0 * ra * s * cos_pa + s * s;
        (-rho).exp() * (ra * sin_a + s * sin_b) / den
    };
    let res = exp_sinh(integrand, 0.0, TOL);
    let value = res.value / (p * PI);
    check_accuracy(value, res.error / (p * PI), "Mittag-Leffler cut integral")
}

fn ml_large_argument(alpha: f64, mu: f64, s: f64) -> Result<f64> {
    // lower μ into (1 - α/2, 1 + α/2] so the substitution exponent stays
    // away from zero
    let mut steps = 0usize;
    let mut base = mu;
    while base > 1.0 + 0.5 * alpha {
        base -= alpha;
        steps += 1;
    }
    let mut value = ml_cut_integral(alpha, base, s)?;
    let mut m = base;
    for _ in 0..steps {
        value = (rgamma(m) - value) / s;
        m += alpha;
    }
    Ok(value)
}

/// E_{1,μ}(-s) without cancellation, μ >= 1:
/// `(1/Γ(μ)) ∫_0^1 exp(-s (1 - v^{1/(μ-1)})) dv`, and e^{-s} at μ = 1.
fn ml_exponential_order(mu: f64, s: f64) -> Result<f64> {
    if mu == 1.0 {
        return Ok((-s).exp());
    }
    if mu > 1.0 {
        let q = 1.0 / (mu - 1.0);
        let res = gauss_kronrod(|v: f64| (-s * (1.0 - v.powf(q))).exp(), 0.0, 1.0, TOL);
        let value = res.value * rgamma(mu);
        return check_accuracy(value, res.error * rgamma(mu), "E_1 integral");
    }
    // E_{1,μ}(-s) = 1/Γ(μ) - s E_{1,μ+1}(-s)
    Ok(rgamma(mu) - s * ml_exponential_order(mu + 1.0, s)?)
}

/// Generalized Mittag-Leffler function E_{α,μ}(-s) = Σ (-s)^n / Γ(αn + μ)
/// for 0 < α <= 1, μ > 0, s >= 0.
pub fn generalized_mittag_leffler(alpha: f64, mu: f64, s: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", alpha, "must lie in (0, 1]"));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::param("mu", mu, "must be positive"));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "Mittag-Leffler evaluation needs s >= 0, got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(rgamma(mu));
    }
    let fallback = |s: f64| {
        if alpha == 1.0 {
            ml_exponential_order(mu, s)
        } else {
            ml_large_argument(alpha, mu, s)
        }
    };
    if s > cfg.switch_point && (alpha < 1.0 || mu >= 1.0) {
        return fallback(s);
    }
    let mut terms = GammaSeriesTerms::new(-s, alpha, mu, false);
    match sum_series(|n| terms.term(n), cfg) {
        SeriesOutcome::Converged(sum) if sum.is_trustworthy() => Ok(sum.value),
        SeriesOutcome::Converged(sum) if s <= 1.0 => Ok(sum.value),
        SeriesOutcome::Converged(_) => fallback(s),
        SeriesOutcome::Exhausted { terms } => {
            if s > 1.0 {
                fallback(s)
            } else {
                Err(Error::NonConvergence {
                    terms,
                    argument: -s,
                })
            }
        }
    }
}

/// Mittag-Leffler function E_β(-s), 0 < β <= 1.
pub fn mittag_leffler(beta: f64, s: f64, cfg: &SeriesConfig) -> Result<f64> {
    generalized_mittag_leffler(beta, 1.0, s, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn exponential_order() {
        for &s in &[0.0, 0.5, 3.0, 40.0, 300.0] {
            let v = mittag_leffler(1.0, s, &cfg()).unwrap();
            assert!((v - (-s).exp()).abs() <= 1e-14 * (1.0 + (-s).exp()));
        }
        // E_{1,2}(-1) = 1 - e^{-1}
        assert_relative_eq!(
            generalized_mittag_leffler(1.0, 2.0, 1.0, &cfg()).unwrap(),
            1.0 - (-1f64).exp(),
            max_relative = 1e-14
        );
        // E_{1,2}(-s) = (1 - e^{-s})/s on the integral branch
        let s = 50.0;
        assert_relative_eq!(
            generalized_mittag_leffler(1.0, 2.0, s, &cfg()).unwrap(),
            (1.0 - (-s).exp()) / s,
            max_relative = 1e-12
        );
    }

    #[test]
    fn series_and_cut_agree() {
        for &(a, mu, s) in &[
            (0.5, 1.0, 1.5),
            (0.3, 1.2, 2.0),
            (0.8, 1.5, 1.0),
            (0.7, 2.4, 3.0),
            (0.3, 2.05, 2.0),
        ] {
            let mut terms = GammaSeriesTerms::new(-s, a, mu, false);
            let series = match sum_series(|n| terms.term(n), &cfg()) {
                SeriesOutcome::Converged(x) => x.value,
                _ => panic!(),
            };
            let cut = ml_large_argument(a, mu, s).unwrap();
            assert_relative_eq!(series, cut, max_relative = 1e-11);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(mittag_leffler(0.0, 1.0, &cfg()).is_err());
        assert!(mittag_leffler(1.5, 1.0, &cfg()).is_err());
        assert!(mittag_leffler(0.5, -1.0, &cfg()).is_err());
        assert!(generalized_mittag_leffler(0.5, 0.0, 1.0, &cfg()).is_err());
    }
}
