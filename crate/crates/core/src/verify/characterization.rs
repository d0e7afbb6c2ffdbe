//! The functional equations behind the characterization results. For the
//! true law, h(z) = 𝓜ρ(z) / (gamma factor) satisfies h(z) = h(α(z-1)+1);
//! iterating the contraction z ↦ α(z-1)+1 drives the orbit to 1, where h
//! takes its known value.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{check_order, composite, params, test_id, SubCheck, VerificationReport, VerifyConfig};
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::mellin::{analytic_mellin, numeric_mellin, strip_of, ComplexValue};
use crate::specfun::{gamma, gamma_complex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CharacterizationKind {
    /// h(z) = 𝓜ρ(z)/Γ(z), limit 1.
    Exponential { beta: f64 },
    /// h(z) = 𝓜ρ(z)/Γ(z-1+r), limit 1/Γ(r).
    Gamma { r: f64, alpha: f64 },
    /// h(s) = 𝓜ρ_{|U|}(s)/(Γ(s/2) 2^{(s-1)/2}), limit 1/√π.
    Gaussian { alpha: f64 },
}

impl CharacterizationKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exp",
            Self::Gamma { .. } => "gamma",
            Self::Gaussian { .. } => "gaussian",
        }
    }

    /// Contraction ratio of the orbit map.
    pub fn ratio(&self) -> f64 {
        match *self {
            Self::Exponential { beta } => beta,
            Self::Gamma { alpha, .. } | Self::Gaussian { alpha } => alpha,
        }
    }

    /// The law whose Mellin transform enters h.
    pub fn law(&self) -> Result<DistributionSpec> {
        match *self {
            Self::Exponential { .. } => Ok(DistributionSpec::Exponential),
            Self::Gamma { r, .. } => DistributionSpec::gamma(r),
            Self::Gaussian { .. } => Ok(DistributionSpec::HalfNormal),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential { beta } => check_order("beta", beta),
            Self::Gamma { alpha, .. } | Self::Gaussian { alpha } => check_order("alpha", alpha),
        }?;
        self.law().map(|_| ())
    }

    /// h(1).
    pub fn limit(&self) -> f64 {
        match *self {
            Self::Exponential { .. } => 1.0,
            Self::Gamma { r, .. } => 1.0 / gamma(r),
            Self::Gaussian { .. } => 1.0 / std::f64::consts::PI.sqrt(),
        }
    }

    fn gamma_factor(&self, z: ComplexValue) -> Result<ComplexValue> {
        Ok(match *self {
            Self::Exponential { .. } => gamma_complex(z)?,
            Self::Gamma { r, .. } => gamma_complex(z - 1.0 + r)?,
            Self::Gaussian { .. } => {
                gamma_complex(0.5 * z)? * ((z - 1.0) * 0.5 * std::f64::consts::LN_2).exp()
            }
        })
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::Exponential { beta } => vec![("beta", beta)],
            Self::Gamma { r, alpha } => vec![("r", r), ("alpha", alpha)],
            Self::Gaussian { alpha } => vec![("alpha", alpha)],
        }
    }

    /// h(z) from the closed-form registry transform.
    pub fn h(&self, z: ComplexValue) -> Result<ComplexValue> {
        Ok(analytic_mellin(self.law()?, z)?.value / self.gamma_factor(z)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationTrace {
    pub kind: CharacterizationKind,
    pub z0: ComplexValue,
    pub orbit: Vec<ComplexValue>,
    pub h_values: Vec<ComplexValue>,
    pub limit: ComplexValue,
    /// max_k | |z_k - 1| - |z_0 - 1| α^k |.
    pub contraction_error: f64,
    /// max_k |h(z_k) - h(1)|.
    pub h_deviation: f64,
}

/// Orbit z_{k+1} = α z_k + (1-α), k = 0..n_steps, with h along it.
pub fn characterization_iteration(
    kind: CharacterizationKind,
    z0: ComplexValue,
    n_steps: usize,
) -> Result<CharacterizationTrace> {
    kind.validate()?;
    if !(z0.re.is_finite() && z0.im.is_finite()) {
        return Err(Error::Domain(format!("orbit start {z0} is not finite")));
    }
    strip_of(kind.law()?).check(z0)?;
    let a = kind.ratio();
    // carried as w = z - 1 so the contraction is a single scaling per step
    let w0 = z0 - 1.0;
    let mut w = w0;
    let mut orbit = Vec::with_capacity(n_steps + 1);
    for _ in 0..=n_steps {
        orbit.push(w + 1.0);
        w *= a;
    }
    let limit = kind.limit();
    let mut h_values = Vec::with_capacity(orbit.len());
    let (mut contraction_error, mut h_deviation) = (0.0f64, 0.0f64);
    for (k, &z) in orbit.iter().enumerate() {
        let expected = w0.norm() * a.powi(k as i32);
        contraction_error = contraction_error.max(((z - 1.0).norm() - expected).abs());
        let h = kind.h(z)?;
        h_deviation = h_deviation.max((h - limit).norm());
        h_values.push(h);
    }
    Ok(CharacterizationTrace {
        kind,
        z0,
        orbit,
        h_values,
        limit: Complex64::new(limit, 0.0),
        contraction_error,
        h_deviation,
    })
}

/// [`characterization_iteration`] as a report, plus a cross-check of
/// h(z_0) with the Mellin transform computed by quadrature.
pub fn verify_characterization(
    kind: CharacterizationKind,
    z0: ComplexValue,
    n_steps: usize,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    kind.validate()?;
    strip_of(kind.law()?).check(z0)?;
    let mut p = kind.params();
    p.push(("z0_re", z0.re));
    p.push(("z0_im", z0.im));
    let id = test_id(&format!("characterization_{}", kind.name()), &p);
    let trace = match characterization_iteration(kind, z0, n_steps) {
        Ok(t) => t,
        Err(e) => return Ok(VerificationReport::from_error(id, params(&p), 1.0, &e)),
    };
    let d = json!({ "steps": n_steps, "final_z": trace.orbit.last(), "limit": trace.limit.re });
    let contraction = Ok((trace.contraction_error, d.clone()));
    let constancy = Ok((trace.h_deviation, d));
    let numeric = || -> Result<(f64, Value)> {
        let law = kind.law()?;
        let m = numeric_mellin(&law, z0, strip_of(law), &cfg.quad)?;
        let h = m.value / kind.gamma_factor(z0)?;
        let rel = (h - kind.limit()).norm() / kind.limit();
        Ok((
            rel,
            json!({ "h_numeric": [h.re, h.im], "error_estimate": m.error }),
        ))
    };
    let subs = vec![
        SubCheck::from_result("contraction", cfg.contraction_tol, contraction),
        SubCheck::from_result("h_constancy", cfg.orbit_tol, constancy),
        SubCheck::from_result("numeric_cross_check", cfg.mellin_tol, numeric()),
    ];
    Ok(composite(id, params(&p), subs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_orbit() {
        let t = characterization_iteration(
            CharacterizationKind::Exponential { beta: 0.5 },
            Complex64::new(4.0, 0.0),
            30,
        )
        .unwrap();
        for (k, z) in t.orbit.iter().enumerate() {
            assert!(((z - 1.0).norm() - 3.0 * 0.5f64.powi(k as i32)).abs() < 1e-14);
        }
        assert!(t.h_deviation < 1e-12);
    }

    #[test]
    fn gamma_and_gaussian_limits() {
        let t = characterization_iteration(
            CharacterizationKind::Gamma { r: 2.0, alpha: 0.3 },
            Complex64::new(2.0, 1.0),
            40,
        )
        .unwrap();
        assert!(t.h_deviation < 1e-10);
        let t = characterization_iteration(
            CharacterizationKind::Gaussian { alpha: 0.6 },
            Complex64::new(3.0, 0.0),
            60,
        )
        .unwrap();
        assert!((t.h_values.last().unwrap().re - 0.56418958354775628).abs() < 1e-10);
    }

    #[test]
    fn start_outside_strip() {
        let r = characterization_iteration(
            CharacterizationKind::Gamma { r: 0.5, alpha: 0.3 },
            Complex64::new(0.2, 0.0),
            5,
        );
        assert!(matches!(r, Err(Error::StripViolation { .. })));
    }

    #[test]
    fn report_passes() {
        let r = verify_characterization(
            CharacterizationKind::Gaussian { alpha: 0.6 },
            Complex64::new(3.0, 0.5),
            40,
            &VerifyConfig::default(),
        )
        .unwrap();
        assert!(r.pass, "{r:#?}");
    }
}
