//! Mellin transforms: numerical quadrature on a strip, Mellin convolution
//! and the closed-form registry for every family in
//! [`DistributionSpec`].
//!
//! ```text
//! (𝓜f)(z) = ∫_0^∞ f(x) x^{z-1} dx,   a < Re z < b
//! (f ⋆ g)(x) = ∫_0^∞ f(x/y) g(y) dy/y,   𝓜(f ⋆ g) = 𝓜f · 𝓜g
//! ```
//!
//! The one-sided stable entry, `Γ(1 + (1-z)/β) / Γ(2-z)` on `Re z < 1 + β`,
//! follows from the Laplace transform `e^{-λ^β}` rather than from the
//! decomposition theorems; it is there to validate the stable-power
//! sampler of the M-Wright law.

use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod, gauss_kronrod_semi_infinite, Tolerance};
use crate::specfun::log_gamma_complex;

pub type ComplexValue = Complex64;

/// The vertical strip `lower < Re z < upper`; either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticStrip {
    pub lower: f64,
    pub upper: f64,
}

impl AnalyticStrip {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || !(lower < upper) {
            return Err(Error::Precondition(format!(
                "empty strip: lower {lower} must be below upper {upper}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn right_of(lower: f64) -> Self {
        Self {
            lower,
            upper: f64::INFINITY,
        }
    }

    pub fn contains(&self, re: f64) -> bool {
        self.lower < re && re < self.upper
    }

    pub fn check(&self, z: ComplexValue) -> Result<()> {
        if self.contains(z.re) {
            Ok(())
        } else {
            Err(Error::StripViolation {
                re: z.re,
                strip: *self,
            })
        }
    }

    /// Strip of `z ↦ F(a(z-1)+1)` when `F` lives on `self`, a > 0.
    pub fn pulled_back(&self, a: f64) -> Self {
        Self {
            lower: (self.lower - 1.0) / a + 1.0,
            upper: (self.upper - 1.0) / a + 1.0,
        }
    }
}

impl fmt::Display for AnalyticStrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} < Re(z) < {}", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MellinMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub z: ComplexValue,
    pub value: ComplexValue,
    pub strip: AnalyticStrip,
    pub method: MellinMethod,
    /// Quadrature error estimate; zero for closed forms.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
    /// Boundary between the head (0, c] and the tail [c, ∞).
    pub split_point: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_refinements: 20,
            split_point: 1.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::param("abs_tol", self.abs_tol, "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::param("rel_tol", self.rel_tol, "must be positive"));
        }
        if self.max_refinements < 1 {
            return Err(Error::param(
                "max_refinements",
                self.max_refinements as f64,
                "must be >= 1",
            ));
        }
        if !(self.split_point > 0.0) || !self.split_point.is_finite() {
            return Err(Error::param(
                "split_point",
                self.split_point,
                "must be positive",
            ));
        }
        Ok(())
    }

    /// Per-piece tolerance when an integral is assembled from two halves.
    fn half_tolerance(&self) -> Tolerance {
        Tolerance::new(0.5 * self.abs_tol, 0.5 * self.rel_tol, self.max_refinements)
    }
}

/// A density on (0, ∞) that the Mellin machinery can integrate.
pub trait Density: Sync {
    fn density(&self, x: f64) -> Result<f64>;

    /// c such that the density behaves like x^{c-1} at 0; `None` when it
    /// vanishes faster than any power.
    fn head_exponent(&self) -> Option<f64> {
        Some(1.0)
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn density(&self, x: f64) -> Result<f64> {
        (**self).density(x)
    }

    fn head_exponent(&self) -> Option<f64> {
        (**self).head_exponent()
    }
}

/// A plain closure with a declared head exponent.
pub struct FnDensity<F> {
    f: F,
    head: Option<f64>,
}

impl<F: Fn(f64) -> f64 + Sync> FnDensity<F> {
    /// A density that is bounded and nonzero at 0.
    pub fn new(f: F) -> Self {
        Self { f, head: Some(1.0) }
    }

    pub fn with_head_exponent(f: F, head: Option<f64>) -> Self {
        Self { f, head }
    }
}

impl<F: Fn(f64) -> f64 + Sync> Density for FnDensity<F> {
    fn density(&self, x: f64) -> Result<f64> {
        Ok((self.f)(x))
    }

    fn head_exponent(&self) -> Option<f64> {
        self.head
    }
}

/// Density of `X^a` (a > 0) for X with density `base`:
/// `(1/a) y^{1/a - 1} f(y^{1/a})`.
pub struct PowerDensity<D> {
    base: D,
    exponent: f64,
}

impl<D: Density> PowerDensity<D> {
    pub fn new(base: D, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0) || !exponent.is_finite() {
            return Err(Error::param("exponent", exponent, "must be positive"));
        }
        Ok(Self { base, exponent })
    }
}

impl<D: Density> Density for PowerDensity<D> {
    fn density(&self, y: f64) -> Result<f64> {
        if y == 0.0 {
            return match self.head_exponent() {
                Some(c) if c < 1.0 => Err(Error::Domain("power density diverges at 0".into())),
                Some(c) if c > 1.0 => Ok(0.0),
                None => Ok(0.0),
                _ => Ok(self.base.density(0.0)? / self.exponent),
            };
        }
        let inv = 1.0 / self.exponent;
        let x = y.powf(inv);
        let f = self.base.density(x)?;
        if f == 0.0 {
            return Ok(0.0);
        }
        Ok(inv * (x / y) * f)
    }

    fn head_exponent(&self) -> Option<f64> {
        self.base.head_exponent().map(|c| c / self.exponent)
    }
}

/// Collects the first density error raised inside a quadrature closure.
struct FirstError(RefCell<Option<Error>>);

impl FirstError {
    fn new() -> Self {
        Self(RefCell::new(None))
    }

    fn eval<D: Density + ?Sized>(&self, d: &D, x: f64) -> f64 {
        match d.density(x) {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    fn into_result(self) -> Result<()> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// `∫_0^∞ f(x) x^{z-1} dx` by quadrature.
///
/// The head (0, c] is integrated by Gauss–Kronrod after `x = c v^{1/e}`,
/// `e = min(1, c_f + Re z - 1)`, which turns the x^{c_f - 1} behaviour of
/// the density into a bounded integrand; the tail [c, ∞) goes through
/// `x = e^u` and Gauss–Kronrod on the mapped half-line.
pub fn numeric_mellin<D: Density + ?Sized>(
    f: &D,
    z: ComplexValue,
    strip: AnalyticStrip,
    cfg: &QuadratureConfig,
) -> Result<MellinValue> {
    cfg.validate()?;
    strip.check(z)?;
    let c = cfg.split_point;
    let ln_c = c.ln();
    let errors = FirstError::new();

    let e = match f.head_exponent() {
        Some(cf) => (cf + z.re - 1.0).min(1.0),
        None => 1.0,
    };
    if !(e > 0.0) {
        return Err(Error::StripViolation { re: z.re, strip });
    }
    // x = c v^{1/e}:  f(x) x^{z-1} dx = f(x) x^z / (e v) dv
    let head_integrand = |v: f64| -> Complex64 {
        if v <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let ln_x = ln_c + v.ln() / e;
        let x = ln_x.exp();
        let fx = errors.eval(f, x);
        if fx == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        (z * ln_x).exp() * (fx / (e * v))
    };
    let head = gauss_kronrod(head_integrand, 0.0, 1.0, cfg.half_tolerance());

    let tail_integrand = |u: f64| -> Complex64 {
        let x = u.exp();
        let fx = errors.eval(f, x);
        if fx == 0.0 || !x.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        (z * u).exp() * fx
    };
    let tail = gauss_kronrod_semi_infinite(tail_integrand, ln_c, cfg.half_tolerance());
    errors.into_result()?;

    let value = head.value + tail.value;
    let error = head.error + tail.error;
    let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
    if !(value.re.is_finite() && value.im.is_finite()) || error > target {
        return Err(Error::Quadrature(format!(
            "Mellin transform at z = {z}: error estimate {error:e} exceeds {target:e} \
             after {} + {} evaluations",
            head.evaluations, tail.evaluations
        )));
    }
    Ok(MellinValue {
        z,
        value,
        strip,
        method: MellinMethod::Quadrature,
        error,
    })
}

/// Density of the product of independent variables with densities f and g:
/// `∫_0^∞ f(x/y) g(y) dy/y`, integrated over u = ln y on both half-lines.
pub fn mellin_convolve<F: Density + ?Sized, G: Density + ?Sized>(
    f: &F,
    g: &G,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Mellin convolution needs x > 0, got {x}"
        )));
    }
    let errors = FirstError::new();
    let ln_x = x.ln();
    let u0 = 0.5 * ln_x;
    let integrand = |u: f64| -> f64 {
        let y = u.exp();
        let q = (ln_x - u).exp();
        if y == 0.0 || q == 0.0 || !y.is_finite() || !q.is_finite() {
            return 0.0;
        }
        let gy = errors.eval(g, y);
        if gy == 0.0 {
            return 0.0;
        }
        let v = errors.eval(f, q) * gy;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let upper = gauss_kronrod_semi_infinite(integrand, u0, cfg.half_tolerance());
    let lower =
        gauss_kronrod_semi_infinite(|w: f64| integrand(2.0 * u0 - w), u0, cfg.half_tolerance());
    errors.into_result()?;
    let value = upper.value + lower.value;
    let error = upper.error + lower.error;
    let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    if !value.is_finite() || error > target {
        return Err(Error::Quadrature(format!(
            "Mellin convolution at x = {x}: error estimate {error:e} exceeds {target:e}"
        )));
    }
    Ok(value)
}

fn lg(z: Complex64) -> Result<Complex64> {
    log_gamma_complex(z)
}

/// `ln Γ(num) - ln Γ(den)`, with 1/Γ at a pole of `den` giving `-∞`.
fn ln_gamma_ratio(num: Complex64, den: Complex64) -> Result<Complex64> {
    let n = lg(num)?;
    match lg(den) {
        Ok(d) => Ok(n - d),
        Err(Error::Pole(_)) => Ok(Complex64::new(f64::NEG_INFINITY, 0.0)),
        Err(e) => Err(e),
    }
}

/// The strip on which the closed-form Mellin transform of `spec` is valid.
pub fn strip_of(spec: DistributionSpec) -> AnalyticStrip {
    match spec {
        DistributionSpec::Exponential
        | DistributionSpec::MWright { .. }
        | DistributionSpec::HalfNormal
        | DistributionSpec::GaussianResidual { .. } => AnalyticStrip::right_of(0.0),
        DistributionSpec::Gamma { r } | DistributionSpec::FoxHResidual { r, .. } => {
            AnalyticStrip::right_of(1.0 - r)
        }
        DistributionSpec::Weibull { k } => AnalyticStrip::right_of(1.0 - k),
        DistributionSpec::OneSidedStable { beta } => AnalyticStrip {
            lower: f64::NEG_INFINITY,
            upper: 1.0 + beta,
        },
    }
}

/// Closed-form Mellin transform of a family's density.
///
/// | family | 𝓜ρ(z) |
/// |---|---|
/// | exponential | Γ(z) |
/// | gamma r | Γ(r-1+z)/Γ(r) |
/// | Weibull k | Γ((z-1)/k + 1) |
/// | one-sided stable β | Γ(1+(1-z)/β)/Γ(2-z) |
/// | M-Wright β | Γ(z)/Γ(β(z-1)+1) |
/// | Fox H residual (r, α) | Γ(r-1+z)/Γ(r-α+αz) |
/// | Gaussian residual α | 2^{(z-1)(1-α)/2} Γ(z/2)/Γ(1/2+α(z-1)/2) |
/// | half-normal | 2^{z/2} Γ(z/2)/√(2π) |
pub fn analytic_mellin(spec: DistributionSpec, z: ComplexValue) -> Result<MellinValue> {
    spec.validate()?;
    let strip = strip_of(spec);
    strip.check(z)?;
    let one = Complex64::new(1.0, 0.0);
    let zm1 = z - 1.0;
    let ln_value = match spec {
        DistributionSpec::Exponential => lg(z)?,
        DistributionSpec::Gamma { r } => lg(z + (r - 1.0))? - lg(Complex64::new(r, 0.0))?,
        DistributionSpec::Weibull { k } => lg(zm1 / k + one)?,
        DistributionSpec::OneSidedStable { beta } => ln_gamma_ratio(one - zm1 / beta, 2.0 - z)?,
        DistributionSpec::MWright { beta } => ln_gamma_ratio(z, zm1 * beta + one)?,
        DistributionSpec::FoxHResidual { r, alpha } => {
            ln_gamma_ratio(z + (r - 1.0), z * alpha + (r - alpha))?
        }
        DistributionSpec::GaussianResidual { alpha } => {
            zm1 * (0.5 * (1.0 - alpha) * LN_2) + ln_gamma_ratio(z * 0.5, zm1 * (0.5 * alpha) + 0.5)?
        }
        DistributionSpec::HalfNormal => z * (0.5 * LN_2) + lg(z * 0.5)? - 0.5 * (2.0 * PI).ln(),
    };
    Ok(MellinValue {
        z,
        value: ln_value.exp(),
        strip,
        method: MellinMethod::ClosedForm,
        error: 0.0,
    })
}

/// Mellin transform of the density of `X^a` for X ~ `spec`:
/// `(𝓜ρ_{X^a})(z) = (𝓜ρ_X)(a(z-1)+1)`, a > 0.
pub fn mellin_of_power(spec: DistributionSpec, a: f64, z: ComplexValue) -> Result<MellinValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::param("exponent", a, "must be positive"));
    }
    spec.validate()?;
    let strip = strip_of(spec).pulled_back(a);
    strip.check(z)?;
    let inner = analytic_mellin(spec, (z - 1.0) * a + 1.0)?;
    Ok(MellinValue {
        z,
        value: inner.value,
        strip,
        method: MellinMethod::ClosedForm,
        error: 0.0,
    })
}
