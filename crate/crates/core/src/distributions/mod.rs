//! The eight distribution families: densities, numerical CDFs, seeded
//! samplers and tabulated inverse CDFs for the two residual laws that have
//! no direct sampler.

mod sampling;
mod table;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::{Density, QuadratureConfig};
use crate::quad::{exp_sinh, gauss_kronrod, tanh_sinh, Tolerance};
use crate::specfun::{
    foxh_residual_density, gaussian_residual_density, ln_gamma, m_wright, FoxHParams,
    MWrightParams, SeriesConfig,
};

pub use sampling::{
    read_samples_csv, sample, sample_half_normal, sample_with, write_samples_csv, HalfNormalMethod,
    SampleBatch,
};
pub use table::{
    build_inverse_cdf_table, load_table, save_table, InverseCdfTable, TableStore, TABLE_DIR_ENV,
};

/// One of the distribution families on (0, ∞), with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// Unit exponential Y₀.
    Exponential,
    /// Gamma Z_r with shape r and unit scale.
    Gamma { r: f64 },
    /// Weibull with shape k, density `k x^{k-1} e^{-x^k}`.
    Weibull { k: f64 },
    /// One-sided stable S_β with Laplace transform `e^{-λ^β}`.
    OneSidedStable { beta: f64 },
    /// M-Wright variable Y_β with density M_β.
    MWright { beta: f64 },
    /// Fox H residual Y_{α,r}.
    FoxHResidual { r: f64, alpha: f64 },
    /// Residual X_α of the half-normal law.
    GaussianResidual { alpha: f64 },
    /// |U| for a standard normal U.
    HalfNormal,
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in (0, 1)"))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be positive and finite"))
    }
}

impl DistributionSpec {
    pub fn exponential() -> Self {
        Self::Exponential
    }

    pub fn gamma(r: f64) -> Result<Self> {
        Self::Gamma { r }.validated()
    }

    pub fn weibull(k: f64) -> Result<Self> {
        Self::Weibull { k }.validated()
    }

    pub fn one_sided_stable(beta: f64) -> Result<Self> {
        Self::OneSidedStable { beta }.validated()
    }

    pub fn m_wright(beta: f64) -> Result<Self> {
        Self::MWright { beta }.validated()
    }

    pub fn foxh_residual(r: f64, alpha: f64) -> Result<Self> {
        Self::FoxHResidual { r, alpha }.validated()
    }

    pub fn gaussian_residual(alpha: f64) -> Result<Self> {
        Self::GaussianResidual { alpha }.validated()
    }

    pub fn half_normal() -> Self {
        Self::HalfNormal
    }

    /// Checks the parameter ranges; every public operation calls this, so
    /// hand-built variants cannot slip through.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential | Self::HalfNormal => Ok(()),
            Self::Gamma { r } => positive("r", r),
            Self::Weibull { k } => positive("k", k),
            Self::OneSidedStable { beta } | Self::MWright { beta } => unit_interval("beta", beta),
            Self::FoxHResidual { r, alpha } => {
                positive("r", r)?;
                unit_interval("alpha", alpha)
            }
            Self::GaussianResidual { alpha } => unit_interval("alpha", alpha),
        }
    }

    fn validated(self) -> Result<Self> {
        self.validate().map(|_| self)
    }

    /// Short family tag used in file names and reports.
    pub fn family(&self) -> &'static str {
        match self {
            Self::Exponential => "exp",
            Self::Gamma { .. } => "gamma",
            Self::Weibull { .. } => "weibull",
            Self::OneSidedStable { .. } => "stable",
            Self::MWright { .. } => "mwright",
            Self::FoxHResidual { .. } => "foxh",
            Self::GaussianResidual { .. } => "gaussres",
            Self::HalfNormal => "halfnormal",
        }
    }

    /// `(name, value)` pairs of the parameters.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::Exponential | Self::HalfNormal => vec![],
            Self::Gamma { r } => vec![("r", r)],
            Self::Weibull { k } => vec![("k", k)],
            Self::OneSidedStable { beta } | Self::MWright { beta } => vec![("beta", beta)],
            Self::FoxHResidual { r, alpha } => vec![("r", r), ("alpha", alpha)],
            Self::GaussianResidual { alpha } => vec![("alpha", alpha)],
        }
    }

    /// Exponent c with density ~ x^{c-1} as x -> 0; `None` when the density
    /// vanishes faster than any power (one-sided stable).
    pub fn head_exponent(&self) -> Option<f64> {
        match *self {
            Self::Gamma { r } | Self::FoxHResidual { r, .. } => Some(r),
            Self::Weibull { k } => Some(k),
            Self::OneSidedStable { .. } => None,
            _ => Some(1.0),
        }
    }

    /// True for families whose samples come from an inverse-CDF table.
    pub fn needs_table(&self) -> bool {
        matches!(
            self,
            Self::FoxHResidual { .. } | Self::GaussianResidual { .. }
        )
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family())?;
        let params = self.params();
        if !params.is_empty() {
            let list: Vec<String> = params.iter().map(|(n, v)| format!("{n}={v}")).collect();
            write!(f, "({})", list.join(", "))?;
        }
        Ok(())
    }
}

/// Probability density of `spec` at `x`.
pub fn pdf(spec: DistributionSpec, x: f64) -> Result<f64> {
    pdf_with(spec, x, &SeriesConfig::default())
}

/// [`pdf`] with an explicit series configuration for the special functions.
pub fn pdf_with(spec: DistributionSpec, x: f64, cfg: &SeriesConfig) -> Result<f64> {
    spec.validate()?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "{spec} density needs x >= 0, got {x}"
        )));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let singular_at_zero = |c: f64| x == 0.0 && c < 1.0;
    match spec {
        DistributionSpec::Exponential => Ok((-x).exp()),
        DistributionSpec::Gamma { r } => {
            if singular_at_zero(r) {
                return Err(Error::Domain(format!(
                    "gamma density with r = {r} diverges at 0"
                )));
            }
            if x == 0.0 {
                return Ok(if r == 1.0 { 1.0 } else { 0.0 });
            }
            Ok(((r - 1.0) * x.ln() - x - ln_gamma(r)).exp())
        }
        DistributionSpec::Weibull { k } => {
            if singular_at_zero(k) {
                return Err(Error::Domain(format!(
                    "Weibull density with k = {k} diverges at 0"
                )));
            }
            if x == 0.0 {
                return Ok(if k == 1.0 { 1.0 } else { 0.0 });
            }
            let xk = x.powf(k);
            Ok(k * xk / x * (-xk).exp())
        }
        DistributionSpec::OneSidedStable { beta } => {
            if x == 0.0 {
                return Ok(0.0);
            }
            // f(x) = β x^{-1-β} M_β(x^{-β})
            let y = x.powf(-beta);
            let m = m_wright(MWrightParams::new(beta)?, y, cfg)?;
            Ok(beta * y / x * m)
        }
        DistributionSpec::MWright { beta } => m_wright(MWrightParams::new(beta)?, x, cfg),
        DistributionSpec::FoxHResidual { r, alpha } => {
            foxh_residual_density(FoxHParams::new(r, alpha)?, x, cfg)
        }
        DistributionSpec::GaussianResidual { alpha } => gaussian_residual_density(alpha, x, cfg),
        DistributionSpec::HalfNormal => Ok((2.0 / PI).sqrt() * (-0.5 * x * x).exp()),
    }
}

impl Density for DistributionSpec {
    fn density(&self, x: f64) -> Result<f64> {
        pdf(*self, x)
    }

    fn head_exponent(&self) -> Option<f64> {
        DistributionSpec::head_exponent(self)
    }
}

/// Integrates `spec`'s density over [a, b] with a < b, propagating the first
/// density failure. The head panel [0, b] goes through tanh-sinh so the
/// x^{c-1} singularity needs no special casing.
pub(crate) fn integrate_pdf(
    spec: DistributionSpec,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<(f64, f64)> {
    let failure = std::cell::RefCell::new(None);
    let f = |x: f64| match pdf(spec, x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let res = if b.is_infinite() {
        exp_sinh(f, a, tol)
    } else if a == 0.0 {
        tanh_sinh(|x, d| f(if x < 0.5 * b { d } else { x }), 0.0, b, tol)
    } else {
        gauss_kronrod(f, a, b, tol)
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::Quadrature(format!(
            "{spec} density over [{a}, {b}]: error estimate {:e} after {} evaluations",
            res.error, res.evaluations
        )));
    }
    Ok((res.value, res.error))
}

/// `P(X <= x)` by quadrature of the density.
pub fn cdf_numeric(spec: DistributionSpec, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    spec.validate()?;
    cfg.validate()?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("cdf needs x > 0, got {x}")));
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let tol = Tolerance::new(cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
    // integrate whichever side is smaller so values near 1 keep their digits
    let split = x.min(cfg.split_point);
    let (head, _) = integrate_pdf(spec, 0.0, split, tol)?;
    if x <= cfg.split_point {
        return Ok(head.clamp(0.0, 1.0));
    }
    let (mid, _) = integrate_pdf(spec, split, x, tol)?;
    Ok((head + mid).clamp(0.0, 1.0))
}
