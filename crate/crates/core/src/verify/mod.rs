//! Executable checks of the decomposition theorems: Mellin registry
//! identities, density convolutions, Monte Carlo product laws, Laplace
//! pairs and the characterization orbits.
//!
//! Every check returns a [`VerificationReport`]. Bad input is an `Err`;
//! numerical trouble during a check is folded into a failed report so a
//! suite always runs to the end.

mod characterization;
mod decomposition;
mod ks;
mod laplace;
mod limit;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::distributions::HalfNormalMethod;
use crate::error::{Error, Result};
use crate::mellin::QuadratureConfig;
use crate::specfun::SeriesConfig;

pub use characterization::{
    characterization_iteration, verify_characterization, CharacterizationKind,
    CharacterizationTrace,
};
pub use decomposition::{
    verify_exponential_decomposition, verify_gamma_decomposition,
    verify_gamma_decomposition_with_residual, verify_gaussian_decomposition,
};
pub use ks::{ks_critical_value, ks_statistic, ks_test, ks_two_sample};
pub use laplace::laplace_pair_check;
pub use limit::{limit_beta_zero_check, limit_beta_zero_check_against, stable_moment_check};

/// Outcome of one identity check. `pass` is always `metric <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub test_id: String,
    pub params: BTreeMap<String, f64>,
    /// `null` in JSON when the check could not be computed.
    #[serde(deserialize_with = "nullable_f64")]
    pub metric: f64,
    pub threshold: f64,
    pub pass: bool,
    pub details: Value,
}

fn nullable_f64<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl VerificationReport {
    pub fn new(
        test_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        metric: f64,
        threshold: f64,
        details: Value,
    ) -> Self {
        Self {
            test_id: test_id.into(),
            params,
            metric,
            threshold,
            pass: metric <= threshold,
            details,
        }
    }

    /// A failed report carrying the error that prevented the check.
    pub fn from_error(
        test_id: impl Into<String>,
        params: BTreeMap<String, f64>,
        threshold: f64,
        err: &Error,
    ) -> Self {
        Self::new(test_id, params, f64::NAN, threshold, error_details(err))
    }

    /// True when the report (or one of its sub-checks) failed because the
    /// numerics broke down rather than because an identity was violated.
    pub fn numerical_failure(&self) -> bool {
        fn scan(v: &Value) -> bool {
            if v.get("error_kind").and_then(Value::as_str) == Some("numerical") {
                return true;
            }
            v.get("sub_checks")
                .and_then(Value::as_array)
                .is_some_and(|subs| subs.iter().any(scan))
        }
        !self.pass && scan(&self.details)
    }

    /// Details of the named sub-check of a composite report.
    pub fn sub_check(&self, name: &str) -> Option<&Value> {
        self.details
            .get("sub_checks")?
            .as_array()?
            .iter()
            .find(|s| s.get("name").and_then(Value::as_str) == Some(name))
    }

    /// Whether the named sub-check passed; `None` if it does not exist.
    pub fn sub_check_passed(&self, name: &str) -> Option<bool> {
        self.sub_check(name)?.get("pass")?.as_bool()
    }
}

fn error_details(err: &Error) -> Value {
    json!({
        "error": err.to_string(),
        "error_kind": if err.is_numerical() { "numerical" } else { "input" },
    })
}

/// Tolerances, sample sizes and numerical settings shared by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Sup-error allowed between a Mellin convolution and the target density.
    pub convolution_tol: f64,
    /// Relative error allowed in closed-form registry identities.
    pub registry_tol: f64,
    /// Relative pointwise error allowed between two closed forms of a density.
    pub density_tol: f64,
    /// Relative error allowed between numeric and closed-form Mellin transforms.
    pub mellin_tol: f64,
    /// Allowed |∫ρ - 1|.
    pub normalization_tol: f64,
    /// Absolute error allowed in the Laplace transform of M_β.
    pub laplace_tol: f64,
    /// Absolute error allowed in ∫ e^{-x} E_β(-x^β t) dx = 1/(1+t).
    pub remark_tol: f64,
    /// Allowed |h(z_k) - h(1)| along a characterization orbit.
    pub orbit_tol: f64,
    /// Allowed deviation of |z_k - 1| from |z_0 - 1| α^k.
    pub contraction_tol: f64,
    pub ks_level: f64,
    /// Monte Carlo batch size.
    pub n: usize,
    pub seed: u64,
    /// Points of the log grids used for density comparisons.
    pub grid_points: usize,
    /// Knots of the inverse-CDF tables of the residual laws.
    pub table_grid: usize,
    pub quad: QuadratureConfig,
    pub series: SeriesConfig,
    pub half_normal: HalfNormalMethod,
    /// Skip the Monte Carlo sub-checks.
    pub skip_monte_carlo: bool,
    /// Skip the deterministic (registry, density, quadrature) sub-checks.
    pub skip_analytic: bool,
    /// Replaces the in-process reference batch of the KS sub-checks.
    pub reference: Option<Vec<f64>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            convolution_tol: 1e-6,
            registry_tol: 1e-12,
            density_tol: 1e-10,
            mellin_tol: 1e-6,
            normalization_tol: 1e-8,
            laplace_tol: 1e-8,
            remark_tol: 1e-7,
            orbit_tol: 1e-10,
            contraction_tol: 1e-14,
            ks_level: 0.01,
            n: 200_000,
            seed: 1,
            grid_points: 40,
            table_grid: 4096,
            quad: QuadratureConfig::default(),
            series: SeriesConfig::default(),
            half_normal: HalfNormalMethod::Fold,
            skip_monte_carlo: false,
            skip_analytic: false,
            reference: None,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("convolution_tol", self.convolution_tol),
            ("registry_tol", self.registry_tol),
            ("density_tol", self.density_tol),
            ("mellin_tol", self.mellin_tol),
            ("normalization_tol", self.normalization_tol),
            ("laplace_tol", self.laplace_tol),
            ("remark_tol", self.remark_tol),
            ("orbit_tol", self.orbit_tol),
            ("contraction_tol", self.contraction_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0) {
                return Err(Error::param(name, v, "must be positive"));
            }
        }
        if !(self.ks_level > 0.0 && self.ks_level < 1.0) {
            return Err(Error::param(
                "ks_level",
                self.ks_level,
                "must lie in (0, 1)",
            ));
        }
        if self.n == 0 {
            return Err(Error::param("n", 0.0, "must be at least 1"));
        }
        if self.grid_points < 2 {
            return Err(Error::param(
                "grid_points",
                self.grid_points as f64,
                "must be >= 2",
            ));
        }
        if self.table_grid < 16 {
            return Err(Error::param(
                "table_grid",
                self.table_grid as f64,
                "must be >= 16",
            ));
        }
        if matches!(&self.reference, Some(r) if r.is_empty()) {
            return Err(Error::Precondition("reference batch is empty".into()));
        }
        self.quad.validate()?;
        self.series.validate()
    }
}

/// Range of β and α accepted by the verification layer; outside it the
/// residual laws degenerate faster than double precision can follow.
pub const SUPPORTED_ORDER: (f64, f64) = (0.05, 0.95);

pub(crate) fn check_order(name: &'static str, v: f64) -> Result<()> {
    if !(v >= SUPPORTED_ORDER.0 && v <= SUPPORTED_ORDER.1) {
        return Err(Error::param(
            name,
            v,
            "must lie in [0.05, 0.95] for verification",
        ));
    }
    Ok(())
}

/// `n` log-spaced points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Independent seed number `stream` derived from `seed` (SplitMix64).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reports sorted by `test_id`, as aggregated output expects.
pub fn aggregate(mut reports: Vec<VerificationReport>) -> Vec<VerificationReport> {
    reports.sort_by(|a, b| a.test_id.cmp(&b.test_id));
    reports
}

/// Logical AND of the reports.
pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub(crate) fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub(crate) fn test_id(name: &str, pairs: &[(&str, f64)]) -> String {
    let args: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{name}[{}]", args.join(","))
}

/// One part of a composite check.
pub(crate) struct SubCheck {
    name: &'static str,
    metric: f64,
    threshold: f64,
    details: Value,
    failed: bool,
}

impl SubCheck {
    pub fn from_result(name: &'static str, threshold: f64, r: Result<(f64, Value)>) -> Self {
        match r {
            Ok((metric, details)) => Self {
                name,
                metric,
                threshold,
                details,
                failed: !(metric <= threshold),
            },
            Err(e) => Self {
                name,
                metric: f64::NAN,
                threshold,
                details: error_details(&e),
                failed: true,
            },
        }
    }

    fn ratio(&self) -> f64 {
        let r = self.metric / self.threshold;
        if r.is_nan() {
            f64::INFINITY
        } else {
            r
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "metric": self.metric,
            "threshold": self.threshold,
            "pass": !self.failed,
        });
        if let (Value::Object(m), Value::Object(d)) = (&mut v, &self.details) {
            for (k, x) in d {
                m.insert(k.clone(), x.clone());
            }
        }
        v
    }
}

/// Report whose metric is the worst `metric / threshold` over the
/// sub-checks, with threshold 1.
pub(crate) fn composite(
    test_id: String,
    params: BTreeMap<String, f64>,
    subs: Vec<SubCheck>,
) -> VerificationReport {
    let metric = subs.iter().map(SubCheck::ratio).fold(0.0, f64::max);
    let details = json!({
        "metric_kind": "max of sub-check metric / threshold",
        "sub_checks": subs.iter().map(SubCheck::to_json).collect::<Vec<_>>(),
    });
    VerificationReport::new(test_id, params, metric, 1.0, details)
}
