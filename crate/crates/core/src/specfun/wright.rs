//! Wright-type functions on the negative real axis.
//!
//! For `-1 < λ < 0` and `x > 0`,
//!
//! ```text
//! W_{λ,μ}(-x) = (1/2πi) ∫_Ha exp(u - x u^α) u^{-μ} du,   α = -λ,
//! ```
//!
//! and on the contour `u = ρ(θ) e^{iθ}` with
//! `ρ(θ)^{1-α} = x sin(αθ) / sin θ` the exponent is real:
//! `u - x u^α = -ρ(θ) sin((1-α)θ) / sin(αθ)`. Folding the two halves gives
//!
//! ```text
//! W_{-α,μ}(-x) = (1/π) ∫_0^π e^{E(θ)} ρ^{1-μ} [ (ρ'/ρ) sin((1-μ)θ) + cos((1-μ)θ) ] dθ,
//! ```
//!
//! a smooth integrand concentrated near θ = 0 for large `x`. The exponent at
//! θ = 0 is factored out so tiny tail values keep full relative accuracy.

use std::f64::consts::PI;

use super::gamma::rgamma;
use super::series::{sum_series, GammaSeriesTerms, SeriesOutcome};
use super::{FoxHParams, MWrightParams, SeriesConfig, WrightParams};
use crate::error::{Error, Result};
use crate::quad::{tanh_sinh, Tolerance};

const INTEGRAL_TOL: Tolerance = Tolerance::new(0.0, 1e-14, 10);
/// Accepted relative error of the contour integral when the requested
/// 1e-14 is out of reach because of rounding.
const INTEGRAL_ACCEPT: f64 = 1e-10;

/// `(α cot(αθ) - cot θ) / (1 - α)`, the logarithmic derivative of ρ(θ).
fn log_rho_slope(alpha: f64, theta: f64, sin_theta: f64, cos_theta: f64) -> f64 {
    if theta < 1e-3 {
        let t2 = theta * theta;
        let a2 = alpha * alpha;
        return theta * ((1.0 - a2) / 3.0 + (1.0 - a2 * a2) * t2 / 45.0) / (1.0 - alpha);
    }
    let at = alpha * theta;
    (alpha * at.cos() / at.sin() - cos_theta / sin_theta) / (1.0 - alpha)
}

/// W_{-α,μ}(-x) for 0 < α < 1, x > 0 by the steepest-descent contour.
pub(crate) fn wright_negative_integral(alpha: f64, mu: f64, x: f64) -> Result<f64> {
    let one_m = 1.0 - alpha;
    let ln_x = x.ln();
    // θ = 0: ρ0 = (αx)^{1/(1-α)}, E0 = -ρ0 (1-α)/α
    let ln_rho0 = (alpha.ln() + ln_x) / one_m;
    let e0 = -ln_rho0.exp() * one_m / alpha;
    let prefactor_ln = e0 + (1.0 - mu) * ln_rho0;
    if prefactor_ln < -745.0 {
        return Ok(0.0);
    }
    let integrand = |theta: f64, dist: f64| -> f64 {
        // dist is the distance to the nearer endpoint, 0 or π
        let near_pi = theta > 0.5 * PI;
        let (sin_t, cos_t) = if near_pi {
            (dist.sin(), -dist.cos())
        } else {
            (theta.sin(), theta.cos())
        };
        let at = alpha * theta;
        let sin_at = at.sin();
        let ln_s = if theta < 1e-8 {
            alpha.ln()
        } else {
            (sin_at / sin_t).ln()
        };
        let ln_rho = (ln_x + ln_s) / one_m;
        let ratio = if theta < 1e-8 {
            one_m / alpha
        } else {
            (one_m * theta).sin() / sin_at
        };
        let exponent = -ln_rho.exp() * ratio;
        let log_weight = exponent - e0 + (1.0 - mu) * (ln_rho - ln_rho0);
        if log_weight < -745.0 {
            return 0.0;
        }
        let slope = log_rho_slope(alpha, theta, sin_t, cos_t);
        let phase = (1.0 - mu) * theta;
        log_weight.exp() * (slope * phase.sin() + phase.cos())
    };
    let res = tanh_sinh(integrand, 0.0, PI, INTEGRAL_TOL);
    let scale = prefactor_ln.exp() / PI;
    if !res.value.is_finite() || res.error > INTEGRAL_ACCEPT * res.value.abs().max(1e-300) {
        // a value that is tiny relative to its own peak is still fine in
        // absolute terms
        let abs_err = res.error * scale;
        if !(abs_err < 1e-15) {
            return Err(Error::Quadrature(format!(
                "Wright contour integral W(-{x}) with alpha={alpha}, mu={mu}: error estimate {:e}",
                res.error
            )));
        }
    }
    Ok(res.value * scale)
}

/// The Wright function W_{λ,μ}(z) = Σ z^l / (l! Γ(λl + μ)).
///
/// Negative arguments with -1 < λ < 0 fall back to the contour integral
/// whenever the series is unreliable; elsewhere the series is the only
/// route and running out of terms is a [`Error::NonConvergence`].
pub fn wright_w(p: WrightParams, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    cfg.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("Wright function at non-finite {z}")));
    }
    let (lambda, mu) = (p.lambda(), p.mu());
    if z == 0.0 {
        return Ok(rgamma(mu));
    }
    let has_contour = z < 0.0 && lambda < 0.0;
    if has_contour && -z > cfg.switch_point {
        return wright_negative_integral(-lambda, mu, -z);
    }
    let mut terms = GammaSeriesTerms::new(z, lambda, mu, true);
    match sum_series(|l| terms.term(l), cfg) {
        SeriesOutcome::Converged(s) if s.is_trustworthy() || !has_contour => Ok(s.value),
        SeriesOutcome::Converged(_) => wright_negative_integral(-lambda, mu, -z),
        SeriesOutcome::Exhausted { .. } if has_contour => wright_negative_integral(-lambda, mu, -z),
        SeriesOutcome::Exhausted { terms } => Err(Error::NonConvergence { terms, argument: z }),
    }
}

/// The M-Wright (Mainardi) function M_β(t) = W_{-β,1-β}(-t), t >= 0.
pub fn m_wright(p: MWrightParams, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "M-Wright function needs t >= 0, got {t}"
        )));
    }
    let beta = p.beta();
    let w = WrightParams::new(-beta, 1.0 - beta)?;
    Ok(wright_w(w, -t, cfg)?.max(0.0))
}

/// Leading large-t behaviour of M_β,
/// `A t^{(β-1/2)/(1-β)} exp(-B t^{1/(1-β)})` with
/// `A = [2π(1-β)]^{-1/2} β^{(β-1/2)/(1-β)}` and `B = (1-β) β^{β/(1-β)}`.
///
/// This is the saddle-point term of the contour integral and is exact only
/// for β = 1/2. It is not used by [`m_wright`]; it is kept for diagnostics
/// of the tail.
pub fn m_wright_asymptotic(p: MWrightParams, t: f64) -> f64 {
    let b = p.beta();
    let q = 1.0 - b;
    let a = (2.0 * PI * q).powf(-0.5) * b.powf((b - 0.5) / q);
    let bb = q * b.powf(b / q);
    a * t.powf((b - 0.5) / q) * (-bb * t.powf(1.0 / q)).exp()
}

/// Density of the Fox H residual Y_{α,r}: `t^{r-1} W_{-α, r(1-α)}(-t)`.
pub fn foxh_residual_density(p: FoxHParams, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let r = p.r();
    if !(t >= 0.0) || (t == 0.0 && r < 1.0) {
        return Err(Error::Domain(format!(
            "Fox H residual density with r = {r} is undefined at t = {t}"
        )));
    }
    if t == 0.0 {
        return Ok(if r == 1.0 {
            rgamma(1.0 - p.alpha())
        } else {
            0.0
        });
    }
    let w = wright_w(p.wright(), -t, cfg)?;
    Ok((t.powf(r - 1.0) * w).max(0.0))
}

/// Density of the residual X_α of the half-normal law:
/// `2^{(α+1)/2} W_{-α,(1-α)/2}(-2^{α-1} t²)`.
pub fn gaussian_residual_density(alpha: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "Gaussian residual density needs t >= 0, got {t}"
        )));
    }
    let w = WrightParams::new(-alpha, 0.5 * (1.0 - alpha))?;
    let arg = -(2f64).powf(alpha - 1.0) * t * t;
    if !arg.is_finite() {
        return Ok(0.0);
    }
    let v = wright_w(w, arg, cfg)?;
    Ok(((2f64).powf(0.5 * (alpha + 1.0)) * v).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma;
    use approx::assert_relative_eq;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn near_pole_coefficient_does_not_stop_series() {
        // 1/Γ(0.2 - 0.8·14) rounds to ~1e-17 instead of 0
        let p = MWrightParams::new(0.8).unwrap();
        assert_relative_eq!(
            m_wright(p, 1.0, &cfg()).unwrap(),
            0.68203369935693093,
            max_relative = 1e-13
        );
    }

    #[test]
    fn tiny_and_huge_arguments() {
        let p = FoxHParams::new(2.5, 0.3).unwrap();
        let t: f64 = 1e-200;
        let expect = t.powf(1.5) * rgamma(1.75);
        assert_relative_eq!(
            foxh_residual_density(p, t, &cfg()).unwrap(),
            expect,
            max_relative = 1e-14
        );
        assert_eq!(gaussian_residual_density(0.5, 1e200, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn m_wright_at_zero() {
        let p = MWrightParams::new(0.5).unwrap();
        assert_relative_eq!(
            m_wright(p, 0.0, &cfg()).unwrap(),
            0.564_189_583_547_756_3,
            max_relative = 1e-15
        );
    }

    #[test]
    fn half_order_closed_form_both_routes() {
        let p = MWrightParams::new(0.5).unwrap();
        for &t in &[0.3f64, 1.0, 2.5, 4.0, 6.0, 9.0] {
            let exact = (-t * t / 4.0).exp() / PI.sqrt();
            let series = m_wright(p, t, &cfg()).unwrap();
            let contour = wright_negative_integral(0.5, 0.5, t).unwrap();
            assert!((series - exact).abs() < 1e-12, "t={t}");
            assert!(
                (contour - exact).abs() <= 1e-13 * exact.max(1e-300) + 1e-300,
                "t={t}"
            );
        }
    }

    #[test]
    fn contour_agrees_with_series_in_overlap() {
        for &(a, mu, x) in &[
            (0.3, 0.7, 2.0),
            (0.7, 0.75, 1.5),
            (0.3, 1.75, 3.0),
            (0.5, 0.25, 1.0),
        ] {
            let w = WrightParams::new(-a, mu).unwrap();
            let mut terms = GammaSeriesTerms::new(-x, -a, mu, true);
            let s = match sum_series(|l| terms.term(l), &cfg()) {
                SeriesOutcome::Converged(s) => s.value,
                _ => panic!(),
            };
            let c = wright_negative_integral(a, mu, x).unwrap();
            assert_relative_eq!(s, c, max_relative = 1e-12);
            assert_relative_eq!(wright_w(w, -x, &cfg()).unwrap(), c, max_relative = 1e-12);
        }
    }

    #[test]
    fn positive_argument_can_fail_to_converge() {
        let w = WrightParams::new(-0.5, 0.5).unwrap();
        let tight = SeriesConfig {
            max_terms: 4,
            ..cfg()
        };
        assert!(matches!(
            wright_w(w, 3.0, &tight),
            Err(Error::NonConvergence { .. })
        ));
        // negative argument reroutes to the contour instead
        assert!(wright_w(w, -3.0, &tight).is_ok());
    }

    #[test]
    fn foxh_small_t_leading_term() {
        let p = FoxHParams::new(2.5, 0.3).unwrap();
        let t: f64 = 1e-6;
        let lead = t.powf(1.5) / gamma(2.5 * 0.7);
        assert_relative_eq!(
            foxh_residual_density(p, t, &cfg()).unwrap(),
            lead,
            max_relative = 1e-5
        );
        let p = FoxHParams::new(0.5, 0.3).unwrap();
        assert!(foxh_residual_density(p, 0.0, &cfg()).is_err());
        assert!(foxh_residual_density(p, -1.0, &cfg()).is_err());
    }

    #[test]
    fn asymptotic_term_is_exact_at_one_half() {
        let p = MWrightParams::new(0.5).unwrap();
        for &t in &[1.0f64, 5.0, 12.0] {
            let exact = (-t * t / 4.0).exp() / PI.sqrt();
            assert_relative_eq!(m_wright_asymptotic(p, t), exact, max_relative = 1e-14);
        }
    }

    #[test]
    fn asymptotic_term_approaches_exact_tail() {
        for &b in &[0.2, 0.35, 0.8] {
            let p = MWrightParams::new(b).unwrap();
            let rel = |t: f64| {
                let exact = m_wright(p, t, &cfg()).unwrap();
                (m_wright_asymptotic(p, t) / exact - 1.0).abs()
            };
            let (t1, t2) = if b > 0.5 { (2.0, 4.0) } else { (5.0, 20.0) };
            assert!(rel(t2) < rel(t1), "beta={b}");
            assert!(rel(t2) < 0.05, "beta={b}: {}", rel(t2));
        }
    }
}
