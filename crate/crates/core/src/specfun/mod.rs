//! Special functions behind the residual densities: reciprocal and log
//! gamma, the M-Wright and Wright functions, the Fox H residual density,
//! the Wright-type residual of the half-normal law and the (generalized)
//! Mittag-Leffler function on the negative real axis.
//!
//! Small arguments are summed from the power series. Once cancellation in
//! the alternating series eats more than three digits (or the argument
//! exceeds [`SeriesConfig::switch_point`]) the evaluators switch to exact,
//! non-oscillatory integral representations obtained by deforming the
//! Hankel contour of 1/Γ; no asymptotic truncation is involved.

mod gamma;
mod mittag_leffler;
mod series;
mod wright;

pub use gamma::{
    gamma, gamma_complex, ln_abs_rgamma, ln_gamma, log_gamma_complex, reciprocal_gamma, sin_pi,
};
pub use mittag_leffler::{generalized_mittag_leffler, mittag_leffler};
pub use wright::{
    foxh_residual_density, gaussian_residual_density, m_wright, m_wright_asymptotic, wright_w,
};

use crate::error::{Error, Result};

/// Order β of the M-Wright function, 0 < β < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MWrightParams {
    beta: f64,
}

impl MWrightParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::param("beta", beta, "must lie in (0, 1)"));
        }
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Parameters (λ, μ) of the Wright function W_{λ,μ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightParams {
    lambda: f64,
    mu: f64,
}

impl WrightParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda > -1.0) || !lambda.is_finite() {
            return Err(Error::param("lambda", lambda, "must exceed -1"));
        }
        if !mu.is_finite() {
            return Err(Error::param("mu", mu, "must be finite"));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

/// Shape `r > 0` and exponent `0 < alpha < 1` of the Fox H residual
/// density with kernel Γ(r - 1 + s) / Γ(r - α + αs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoxHParams {
    r: f64,
    alpha: f64,
}

impl FoxHParams {
    pub fn new(r: f64, alpha: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::param("r", r, "must be positive"));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
        }
        Ok(Self { r, alpha })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The Wright parameters (λ, μ) = (-α, r(1 - α)) of the series.
    pub fn wright(&self) -> WrightParams {
        WrightParams {
            lambda: -self.alpha,
            mu: self.r * (1.0 - self.alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub max_terms: usize,
    /// Summation stops after three consecutive terms with
    /// |term| < term_tolerance * max(1, |partial sum|).
    pub term_tolerance: f64,
    /// Arguments above this go straight to the integral representation.
    pub switch_point: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_terms: 400,
            term_tolerance: 1e-16,
            switch_point: 5.0,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::param(
                "max_terms",
                self.max_terms as f64,
                "must be >= 1",
            ));
        }
        if !(self.term_tolerance > 0.0) {
            return Err(Error::param(
                "term_tolerance",
                self.term_tolerance,
                "must be positive",
            ));
        }
        if !(self.switch_point > 0.0) {
            return Err(Error::param(
                "switch_point",
                self.switch_point,
                "must be positive",
            ));
        }
        Ok(())
    }
}
