//! Gamma function family: real and complex log-gamma, the entire reciprocal
//! gamma function and an exact `sin(pi x)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_MAX_ARG: f64 = 171.5;

/// `sin(pi x)` with exact zeros at the integers and no loss for large |x|.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // r in [-1, 1], exact for binary floating point
    let r = x - 2.0 * (0.5 * x).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(z: f64) -> f64 {
    // z already shifted by -1
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for x >= 0.5 without overflow guarding.
fn gamma_right(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power to postpone overflow near the top of the range
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(z)
}

/// ln Γ(x) for x >= 0.5.
fn ln_gamma_right(x: f64) -> f64 {
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// (n-1)! for small positive integers, exact up to 22!.
fn integer_gamma(x: f64) -> Option<f64> {
    if (1.0..=30.0).contains(&x) && x == x.floor() {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        Some(acc)
    } else {
        None
    }
}

/// Real gamma function; `NaN` at the poles.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() || is_nonpositive_integer(x) {
        return f64::NAN;
    }
    if let Some(g) = integer_gamma(x) {
        return g;
    }
    if x >= 0.5 {
        if x > GAMMA_MAX_ARG {
            return f64::INFINITY;
        }
        gamma_right(x)
    } else {
        PI / (sin_pi(x) * gamma(1.0 - x))
    }
}

/// ln|Γ(x)|; `+inf` at the poles.
pub fn ln_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x >= 0.5 {
        ln_gamma_right(x)
    } else {
        PI.ln() - sin_pi(x).abs().ln() - ln_gamma_right(1.0 - x)
    }
}

/// `(ln|1/Γ(x)|, sign(1/Γ(x)))`, with sign `0.0` at the zeros of 1/Γ.
///
/// Used by the series evaluators, whose coefficients 1/Γ(μ - αl) overflow
/// long before the terms themselves do.
pub fn ln_abs_rgamma(x: f64) -> (f64, f64) {
    if is_nonpositive_integer(x) {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x >= 0.5 {
        (-ln_gamma_right(x), 1.0)
    } else {
        let s = sin_pi(x);
        (s.abs().ln() + ln_gamma_right(1.0 - x) - PI.ln(), s.signum())
    }
}

/// 1/Γ(x) without error reporting; `NaN` for non-finite input.
pub(crate) fn rgamma(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if let Some(g) = integer_gamma(x) {
        return 1.0 / g;
    }
    if x >= 0.5 {
        if x > GAMMA_MAX_ARG {
            return (-ln_gamma_right(x)).exp();
        }
        1.0 / gamma_right(x)
    } else {
        let y = 1.0 - x;
        if y > GAMMA_MAX_ARG {
            let (l, s) = ln_abs_rgamma(x);
            return s * l.exp();
        }
        sin_pi(x) * gamma_right(y) / PI
    }
}

/// The reciprocal gamma function 1/Γ(x), an entire function.
///
/// Zeros at the nonpositive integers are exact. Arguments below 0.5 go
/// through the reflection 1/Γ(x) = sin(πx) Γ(1 - x) / π.
pub fn reciprocal_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "reciprocal gamma needs a finite argument, got {x}"
        )));
    }
    Ok(rgamma(x))
}

fn ln_gamma_complex_right(z: Complex64) -> Complex64 {
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += *c / (zm + i as f64);
    }
    let t = zm + (LANCZOS_G + 0.5);
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + acc.ln()
}

/// Log-gamma of a complex argument.
///
/// Lanczos (g = 7) on Re(z) >= 1/2, the recurrence Γ(z) = Γ(z + n) / z(z+1)…(z+n-1)
/// below that, and the reflection formula once the shift becomes long.
/// The imaginary part follows the analytic continuation from the positive
/// real axis, so `exp` of the result is Γ(z).
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("log-gamma of non-finite {z}")));
    }
    if z.im == 0.0 && is_nonpositive_integer(z.re) {
        return Err(Error::Pole(z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_complex_right(z));
    }
    let shift = (0.5 - z.re).ceil();
    if shift <= 200.0 {
        let n = shift as usize;
        let mut log_prod = Complex64::new(0.0, 0.0);
        for k in 0..n {
            log_prod += (z + k as f64).ln();
        }
        return Ok(ln_gamma_complex_right(z + shift) - log_prod);
    }
    // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z)
    let s = (z * PI).sin();
    Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_complex_right(1.0 - z))
}

/// Γ(z) for complex z.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    log_gamma_complex(z).map(|l| l.exp())
}
