//! Monte Carlo checks on the M-Wright family itself: the β → 0 limit and
//! the Mellin moments of S_β^{-β}.

use num_complex::Complex64;
use serde_json::json;

use super::ks::ks_statistic;
use super::{check_order, derive_seed, params, test_id, VerificationReport};
use crate::distributions::{sample, DistributionSpec};
use crate::error::{Error, Result};
use crate::mellin::analytic_mellin;

/// Standard deviation of the Kolmogorov distribution; the null standard
/// error of D is this times sqrt((n+m)/(nm)).
const KOLMOGOROV_SD: f64 = 0.2603;

/// KS distance between M-Wright(β) draws and Exp(1) draws for each β of a
/// strictly decreasing list; the metric counts the steps where the distance
/// grows by more than one standard error.
pub fn limit_beta_zero_check(betas: &[f64], n: usize, seed: u64) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "must be at least 1"));
    }
    let reference = sample(DistributionSpec::Exponential, n, seed)?.values;
    limit_beta_zero_check_against(betas, &reference, n, seed)
}

/// [`limit_beta_zero_check`] against a given Exp(1) reference batch.
pub fn limit_beta_zero_check_against(
    betas: &[f64],
    reference: &[f64],
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if betas.is_empty() {
        return Err(Error::Precondition("need at least one beta".into()));
    }
    for &b in betas {
        check_order("beta", b)?;
    }
    if betas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Precondition(format!(
            "betas must be strictly decreasing, got {betas:?}"
        )));
    }
    if n == 0 || reference.is_empty() {
        return Err(Error::Precondition(
            "sample sizes must be at least 1".into(),
        ));
    }
    let m = reference.len() as f64;
    let slack = KOLMOGOROV_SD * ((n as f64 + m) / (n as f64 * m)).sqrt();
    // one seed for every β: common random numbers keep the comparison sharp
    let s = derive_seed(seed, 3);
    let mut distances = Vec::with_capacity(betas.len());
    for &b in betas {
        let draws = sample(DistributionSpec::m_wright(b)?, n, s)?.values;
        distances.push(ks_statistic(&draws, reference)?);
    }
    let inversions = distances.windows(2).filter(|w| w[1] > w[0] + slack).count();
    let mut p = vec![("n", n as f64), ("seed", seed as f64)];
    p.extend(betas.iter().map(|&b| ("beta", b)));
    let id = test_id("limit_beta_zero", &p[..2]);
    let mut pm = params(&p[..2]);
    pm.insert("beta_first".into(), betas[0]);
    pm.insert("beta_last".into(), *betas.last().unwrap_or(&betas[0]));
    Ok(VerificationReport::new(
        id,
        pm,
        inversions as f64,
        0.0,
        json!({ "betas": betas, "ks_distances": distances, "slack": slack,
            "sample_seed": s, "n_reference": reference.len() }),
    ))
}

/// Sample Mellin moments E[Y^{z-1}] of Y = S_β^{-β}, with S_β drawn by the
/// one-sided stable sampler, against Γ(z)/Γ(β(z-1)+1). The metric is the
/// largest deviation in Monte Carlo standard errors; threshold `n_se`.
pub fn stable_moment_check(
    beta: f64,
    zs: &[f64],
    n: usize,
    seed: u64,
    n_se: f64,
) -> Result<VerificationReport> {
    check_order("beta", beta)?;
    if n < 2 {
        return Err(Error::param("n", n as f64, "must be at least 2"));
    }
    if zs.is_empty() || zs.iter().any(|z| !(*z > 0.0)) {
        return Err(Error::Precondition("moment orders need Re z > 0".into()));
    }
    let stable = sample(DistributionSpec::one_sided_stable(beta)?, n, seed)?.values;
    let y: Vec<f64> = stable.iter().map(|s| s.powf(-beta)).collect();
    let mw = DistributionSpec::m_wright(beta)?;
    let mut worst: f64 = 0.0;
    let mut points = Vec::new();
    for &z in zs {
        let vals: Vec<f64> = y.iter().map(|v| v.powf(z - 1.0)).collect();
        let nf = n as f64;
        let mean = vals.iter().sum::<f64>() / nf;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        let se = (var / nf).sqrt();
        let exact = analytic_mellin(mw, Complex64::new(z, 0.0))?.value.re;
        let dev = (mean - exact).abs() / se;
        worst = worst.max(dev);
        points.push(json!({ "z": z, "sample_mean": mean, "exact": exact,
            "standard_error": se, "deviation_se": dev }));
    }
    let p = [("beta", beta)];
    let mut pm = params(&p);
    pm.insert("n".into(), n as f64);
    pm.insert("seed".into(), seed as f64);
    Ok(VerificationReport::new(
        test_id("stable_moments", &p),
        pm,
        worst,
        n_se,
        json!({ "points": points }),
    ))
}
