//! Laplace pairs of the M-Wright function:
//! ∫ e^{-st} M_β(t) dt = E_β(-s) and ∫ e^{-x} E_β(-x^β t) dx = 1/(1+t).

use std::cell::RefCell;

use serde_json::{json, Value};

use super::{check_order, composite, params, test_id, SubCheck, VerificationReport, VerifyConfig};
use crate::error::{Error, Result};
use crate::quad::{gauss_kronrod_semi_infinite, Tolerance};
use crate::specfun::{m_wright, mittag_leffler, MWrightParams};

const TOL: Tolerance = Tolerance::new(1e-13, 1e-12, 40);

/// ∫_0^∞ f, propagating the first evaluation error.
fn integrate_half_line(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let failure = RefCell::new(None);
    let res = gauss_kronrod_semi_infinite(
        |x: f64| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        TOL,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::Quadrature(format!(
            "half-line integral: error estimate {:e} after {} evaluations",
            res.error, res.evaluations
        )));
    }
    Ok(res.value)
}

fn worst_of(points: Vec<(f64, f64, f64)>, arg: &str) -> (f64, Value) {
    let worst = points.iter().map(|p| (p.1 - p.2).abs()).fold(0.0, f64::max);
    let pts: Vec<Value> = points
        .iter()
        .map(|&(a, lhs, rhs)| json!({ arg: a, "integral": lhs, "closed_form": rhs }))
        .collect();
    (worst, json!({ "points": pts }))
}

/// Checks both Laplace identities at every value of `s_values` (used as
/// `s` in the first and `t` in the second). β = 1 checks the degenerate
/// pair E_1(-s) = e^{-s} instead.
pub fn laplace_pair_check(
    beta: f64,
    s_values: &[f64],
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    cfg.validate()?;
    if s_values.is_empty() || s_values.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
        return Err(Error::Precondition(
            "s-values must be finite and >= 0".into(),
        ));
    }
    let p = [("beta", beta)];
    let id = test_id("laplace_pair", &p);
    if beta == 1.0 {
        let run = || -> Result<(f64, Value)> {
            let pts = s_values
                .iter()
                .map(|&s| Ok((s, mittag_leffler(1.0, s, &cfg.series)?, (-s).exp())))
                .collect::<Result<Vec<_>>>()?;
            Ok(worst_of(pts, "s"))
        };
        let subs = vec![SubCheck::from_result(
            "exponential_limit",
            cfg.laplace_tol,
            run(),
        )];
        return Ok(composite(id, params(&p), subs));
    }
    check_order("beta", beta)?;
    let mw = MWrightParams::new(beta)?;
    let transform = || -> Result<(f64, Value)> {
        let pts = s_values
            .iter()
            .map(|&s| {
                let lhs =
                    integrate_half_line(|t| Ok((-s * t).exp() * m_wright(mw, t, &cfg.series)?))?;
                Ok((s, lhs, mittag_leffler(beta, s, &cfg.series)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(worst_of(pts, "s"))
    };
    let remark = || -> Result<(f64, Value)> {
        let pts = s_values
            .iter()
            .map(|&t| {
                let lhs = integrate_half_line(|x| {
                    let e = (-x).exp();
                    if e == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(e * mittag_leffler(beta, x.powf(beta) * t, &cfg.series)?)
                })?;
                Ok((t, lhs, 1.0 / (1.0 + t)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(worst_of(pts, "t"))
    };
    let subs = vec![
        SubCheck::from_result("laplace_transform", cfg.laplace_tol, transform()),
        SubCheck::from_result("remark_identity", cfg.remark_tol, remark()),
    ];
    Ok(composite(id, params(&p), subs))
}
