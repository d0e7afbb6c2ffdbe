//! Two-sample Kolmogorov–Smirnov test.

use serde_json::json;

use super::{params, VerificationReport};
use crate::distributions::SampleBatch;
use crate::error::{Error, Result};

/// Asymptotic Smirnov constant c(level): 1.628 at 1 %, 1.358 at 5 %,
/// `sqrt(-ln(level/2) / 2)` otherwise.
pub fn ks_critical_value(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param("level", level, "must lie in (0, 1)"));
    }
    Ok(if level == 0.01 {
        1.628
    } else if level == 0.05 {
        1.358
    } else {
        (-(0.5 * level).ln() / 2.0).sqrt()
    })
}

fn sorted(v: &[f64]) -> Result<Vec<f64>> {
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("KS input contains NaN".into()));
    }
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    Ok(s)
}

/// sup |F_a - F_b| over the merged sample, ties handled exactly.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition(
            "KS test needs two nonempty samples".into(),
        ));
    }
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// KS test of two plain samples; metric D, threshold c(level)·sqrt((n+m)/(nm)).
pub fn ks_test(test_id: &str, a: &[f64], b: &[f64], level: f64) -> Result<VerificationReport> {
    let c = ks_critical_value(level)?;
    let d = ks_statistic(a, b)?;
    let (n, m) = (a.len() as f64, b.len() as f64);
    let threshold = c * ((n + m) / (n * m)).sqrt();
    Ok(VerificationReport::new(
        test_id,
        params(&[("level", level)]),
        d,
        threshold,
        json!({ "n": a.len(), "m": b.len(), "c_level": c }),
    ))
}

/// [`ks_test`] on two batches, recording their laws and seeds.
pub fn ks_two_sample(a: &SampleBatch, b: &SampleBatch, level: f64) -> Result<VerificationReport> {
    let mut r = ks_test("ks_two_sample", &a.values, &b.values, level)?;
    if let serde_json::Value::Object(m) = &mut r.details {
        m.insert(
            "a".into(),
            json!({ "spec": a.spec.to_string(), "seed": a.seed }),
        );
        m.insert(
            "b".into(),
            json!({ "spec": b.spec.to_string(), "seed": b.seed }),
        );
    }
    Ok(r)
}
