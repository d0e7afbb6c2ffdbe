//! Tabulated inverse CDFs.
//!
//! Knots sit on a logit-spaced probability grid. Each quantile is found by
//! a safeguarded Newton iteration on `F(q) - p`, with F accumulated from
//! the previous knot by Gauss–Kronrod, so the whole table costs one pass
//! over the support. Between knots the quantile function is a cubic
//! Hermite interpolant with slopes `dq/dp = 1/ρ(q)`; below the first knot
//! it follows the `q ∝ p^{1/c}` head law of an x^{c-1} density, above the
//! last knot an exponential tail with the hazard rate of the last knot.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use super::{integrate_pdf, pdf, DistributionSpec};
use crate::error::{Error, Result};
use crate::mellin::QuadratureConfig;
use crate::quad::Tolerance;

const FORMAT_TAG: &str = "# selfdecomp-table v1";
/// Smallest knot probability; the grid is symmetric in logit.
const P_MIN: f64 = 1e-9;
/// Worst acceptable |total mass - 1| of a built table.
const MASS_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct InverseCdfTable {
    spec: DistributionSpec,
    probabilities: Vec<f64>,
    quantiles: Vec<f64>,
    densities: Vec<f64>,
    /// c in `q ≈ q₀ (p/p₀)^{1/c}` below the first knot.
    head_exponent: f64,
    /// λ in `1 - F(q) ≈ (1 - p_n) e^{-λ (q - q_n)}` above the last knot.
    tail_rate: f64,
}

impl InverseCdfTable {
    pub fn spec(&self) -> DistributionSpec {
        self.spec
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn quantiles(&self) -> &[f64] {
        &self.quantiles
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// `(head exponent c, tail hazard rate λ)` of the extrapolations.
    pub fn tail_exponents(&self) -> (f64, f64) {
        (self.head_exponent, self.tail_rate)
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Interpolated quantile for `p` in (0, 1).
    pub fn quantile(&self, p: f64) -> f64 {
        let ps = &self.probabilities;
        let qs = &self.quantiles;
        let n = ps.len();
        if p <= ps[0] {
            return qs[0] * (p / ps[0]).powf(1.0 / self.head_exponent);
        }
        if p >= ps[n - 1] {
            return qs[n - 1] + ((1.0 - ps[n - 1]) / (1.0 - p)).ln() / self.tail_rate;
        }
        let i = ps.partition_point(|&x| x <= p) - 1;
        let h = ps[i + 1] - ps[i];
        let t = (p - ps[i]) / h;
        let (d0, d1) = (self.densities[i], self.densities[i + 1]);
        if !(d0 > 0.0 && d1 > 0.0) {
            return qs[i] + t * (qs[i + 1] - qs[i]);
        }
        let (m0, m1) = (h / d0, h / d1);
        let t2 = t * t;
        let t3 = t2 * t;
        let q = (2.0 * t3 - 3.0 * t2 + 1.0) * qs[i]
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * qs[i + 1]
            + (t3 - t2) * m1;
        q.clamp(qs[i], qs[i + 1])
    }

    /// The table's median knot interpolation, a convenient probe.
    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Writes the `p,q,density` CSV with a versioned header line.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let spec = serde_json::to_string(&self.spec)?;
        writeln!(
            w,
            "{FORMAT_TAG} spec={spec} head_exponent={:.16e} tail_rate={:.16e}",
            self.head_exponent, self.tail_rate
        )?;
        writeln!(w, "p,q,density")?;
        for i in 0..self.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e}",
                self.probabilities[i], self.quantiles[i], self.densities[i]
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty table file".into()))??;
        let rest = header
            .strip_prefix(FORMAT_TAG)
            .ok_or_else(|| Error::Parse(format!("not a table file: `{header}`")))?;
        let mut spec = None;
        let mut head = None;
        let mut tail = None;
        for field in rest.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let num = || {
                v.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number in `{field}`")))
            };
            match k {
                "spec" => spec = Some(serde_json::from_str::<DistributionSpec>(v)?),
                "head_exponent" => head = Some(num()?),
                "tail_rate" => tail = Some(num()?),
                _ => {}
            }
        }
        let (spec, head_exponent, tail_rate) = match (spec, head, tail) {
            (Some(s), Some(h), Some(t)) => (s, h, t),
            _ => return Err(Error::Parse("table header is incomplete".into())),
        };
        spec.validate()?;
        let mut t = InverseCdfTable {
            spec,
            probabilities: Vec::new(),
            quantiles: Vec::new(),
            densities: Vec::new(),
            head_exponent,
            tail_rate,
        };
        for (i, line) in lines.enumerate() {
            let line = line?;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad table row `{line}`")))?;
            if cols.len() != 3 {
                return Err(Error::Parse(format!("expected 3 columns in `{line}`")));
            }
            t.probabilities.push(cols[0]);
            t.quantiles.push(cols[1]);
            t.densities.push(cols[2]);
        }
        t.check_monotone()?;
        Ok(t)
    }

    fn check_monotone(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::Parse("a table needs at least two knots".into()));
        }
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&self.probabilities) || !increasing(&self.quantiles) {
            return Err(Error::Parse(
                "table knots are not strictly increasing".into(),
            ));
        }
        if !(self.probabilities[0] > 0.0 && *self.probabilities.last().unwrap() < 1.0) {
            return Err(Error::Parse(
                "table probabilities must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Finds s with g(s) = 0 for increasing g, keeping a bracket and falling
/// back to bisection (or bracket expansion) when Newton misbehaves.
fn safeguarded_newton(
    mut s: f64,
    mut lo: f64,
    mut hi: f64,
    gtol: f64,
    mut eval: impl FnMut(f64) -> Result<(f64, f64)>,
) -> Result<f64> {
    for _ in 0..200 {
        let (g, dg) = eval(s)?;
        if g.abs() <= gtol {
            return Ok(s);
        }
        if g < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if hi.is_finite()
            && lo.is_finite()
            && (hi - lo) <= 4.0 * f64::EPSILON * hi.abs().max(lo.abs())
        {
            return Ok(s);
        }
        let newton = s - g / dg;
        s = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else if hi.is_infinite() {
            s + (s - lo).abs().max(1.0)
        } else if lo.is_infinite() {
            s - (hi - s).abs().max(1.0)
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Quadrature(
        "quantile iteration did not converge".into(),
    ))
}

/// Builds the inverse CDF of `spec` on `grid_size` logit-spaced knots.
///
/// The lower half of the grid is solved left to right on the CDF, the upper
/// half right to left on the survival function, so both tails keep their
/// relative accuracy. Any family works; the samplers only need tables for
/// the Fox H and Gaussian residuals.
pub fn build_inverse_cdf_table(
    spec: DistributionSpec,
    grid_size: usize,
    cfg: &QuadratureConfig,
) -> Result<InverseCdfTable> {
    spec.validate()?;
    cfg.validate()?;
    if grid_size < 8 {
        return Err(Error::param(
            "grid_size",
            grid_size as f64,
            "must be at least 8",
        ));
    }
    // every knot integral is held well below the configured tolerance so
    // the accumulated CDF error stays within it
    let tol = Tolerance::new(
        cfg.abs_tol * 1e-4,
        cfg.rel_tol * 1e-4,
        cfg.max_refinements.max(30),
    );
    let l_max = ((1.0 - P_MIN) / P_MIN).ln();
    let logits: Vec<f64> = (0..grid_size)
        .map(|i| -l_max + 2.0 * l_max * i as f64 / (grid_size - 1) as f64)
        .collect();
    // p and 1 - p, each computed without cancellation
    let lower_p = |l: f64| 1.0 / (1.0 + (-l).exp());
    let upper_p = |l: f64| 1.0 / (1.0 + l.exp());
    let probabilities: Vec<f64> = logits.iter().map(|&l| lower_p(l)).collect();
    let n = grid_size - 1;
    let half = grid_size / 2;
    let mut quantiles = vec![0.0; grid_size];

    // extreme knots: solve ln(mass) = ln(target) in ln q, where the mass
    // beyond q behaves like a power (head) or decays smoothly (tail)
    let p0 = probabilities[0];
    let ln_q0 = safeguarded_newton(0.0, f64::NEG_INFINITY, f64::INFINITY, 1e-10, |s| {
        let q = s.exp();
        let (mass, _) = integrate_pdf(spec, 0.0, q, tol)?;
        if mass <= 0.0 {
            return Ok((f64::NEG_INFINITY, f64::NAN));
        }
        Ok((mass.ln() - p0.ln(), q * pdf(spec, q)? / mass))
    })?;
    quantiles[0] = ln_q0.exp();
    let s_n = upper_p(logits[n]);
    let ln_qn = safeguarded_newton(0.0, f64::NEG_INFINITY, f64::INFINITY, 1e-10, |s| {
        let q = s.exp();
        let (mass, _) = integrate_pdf(spec, q, f64::INFINITY, tol)?;
        if mass <= 0.0 {
            return Ok((f64::INFINITY, f64::NAN));
        }
        Ok((s_n.ln() - mass.ln(), q * pdf(spec, q)? / mass))
    })?;
    quantiles[n] = ln_qn.exp();

    for i in 1..half {
        let (q_prev, p_prev, p) = (quantiles[i - 1], probabilities[i - 1], probabilities[i]);
        let f_prev = pdf(spec, q_prev)?;
        let guess = if f_prev > 0.0 {
            q_prev + (p - p_prev) / f_prev
        } else {
            2.0 * q_prev
        };
        let gtol = 1e-11 * p;
        quantiles[i] = safeguarded_newton(guess, q_prev, f64::INFINITY, gtol, |q| {
            let (mass, _) = integrate_pdf(spec, q_prev, q, tol)?;
            Ok((p_prev + mass - p, pdf(spec, q)?))
        })?;
    }
    for i in (half..n).rev() {
        let q_next = quantiles[i + 1];
        let (s_next, s) = (upper_p(logits[i + 1]), upper_p(logits[i]));
        let f_next = pdf(spec, q_next)?;
        let guess = if f_next > 0.0 {
            q_next - (s - s_next) / f_next
        } else {
            0.5 * q_next
        };
        let gtol = 1e-11 * s;
        quantiles[i] = safeguarded_newton(guess, 0.0, q_next, gtol, |q| {
            let (mass, _) = integrate_pdf(spec, q, q_next, tol)?;
            Ok((s - (s_next + mass), pdf(spec, q)?))
        })?;
    }

    // the two halves meet in the middle; their mismatch is the mass error
    let (mid, _) = integrate_pdf(spec, quantiles[half - 1], quantiles[half], tol)?;
    let expected = probabilities[half] - probabilities[half - 1];
    let mass_error = (mid - expected).abs();
    if mass_error > MASS_TOLERANCE {
        return Err(Error::Quadrature(format!(
            "{spec}: table mass differs from 1 by {mass_error:e}"
        )));
    }
    let densities = quantiles
        .iter()
        .map(|&q| pdf(spec, q))
        .collect::<Result<Vec<_>>>()?;
    let head_exponent = match spec.head_exponent() {
        Some(c) => c,
        // local log-log slope of the CDF at the first knots
        None => (probabilities[1] / probabilities[0]).ln() / (quantiles[1] / quantiles[0]).ln(),
    };
    let tail_rate = densities[n] / s_n;
    let table = InverseCdfTable {
        spec,
        probabilities,
        quantiles,
        densities,
        head_exponent,
        tail_rate,
    };
    table.check_monotone().map_err(|_| {
        Error::Quadrature(format!(
            "{spec}: quantile knots are not strictly increasing"
        ))
    })?;
    Ok(table)
}

/// Thread-safe registry of built tables, optionally backed by a directory
/// of CSV files.
#[derive(Debug, Default)]
pub struct TableStore {
    tables: RwLock<HashMap<String, Arc<InverseCdfTable>>>,
    cache_dir: Option<PathBuf>,
}

/// Environment variable naming the on-disk table cache.
pub const TABLE_DIR_ENV: &str = "SELFDECOMP_TABLE_DIR";

impl TableStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            tables: RwLock::default(),
            cache_dir: Some(dir.into()),
        }
    }

    /// Process-wide store; its cache directory comes from
    /// `SELFDECOMP_TABLE_DIR` at first use.
    pub fn global() -> &'static TableStore {
        static GLOBAL: OnceLock<TableStore> = OnceLock::new();
        GLOBAL.get_or_init(|| match std::env::var_os(TABLE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => TableStore::with_cache_dir(dir),
            _ => TableStore::new(),
        })
    }

    fn key(spec: DistributionSpec) -> String {
        spec.to_string()
    }

    pub fn get(&self, spec: DistributionSpec) -> Option<Arc<InverseCdfTable>> {
        self.tables.read().ok()?.get(&Self::key(spec)).cloned()
    }

    pub fn insert(&self, table: InverseCdfTable) -> Arc<InverseCdfTable> {
        let table = Arc::new(table);
        if let Ok(mut map) = self.tables.write() {
            map.insert(Self::key(table.spec), Arc::clone(&table));
        }
        table
    }

    /// File name used for `spec` in a cache directory.
    pub fn file_name(spec: DistributionSpec, grid_size: usize) -> String {
        let mut name = spec.family().to_string();
        for (k, v) in spec.params() {
            name.push_str(&format!("_{k}{v}"));
        }
        format!("{name}_n{grid_size}.csv")
    }

    fn cached_path(&self, spec: DistributionSpec, grid_size: usize) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(Self::file_name(spec, grid_size)))
    }

    /// Returns the stored table, loading it from the cache directory or
    /// building (and caching) it when absent.
    pub fn get_or_build(
        &self,
        spec: DistributionSpec,
        grid_size: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Arc<InverseCdfTable>> {
        if let Some(t) = self.get(spec) {
            if t.len() == grid_size {
                return Ok(t);
            }
        }
        if let Some(path) = self.cached_path(spec, grid_size) {
            if let Ok(t) = load_table(&path) {
                if t.spec == spec && t.len() == grid_size {
                    return Ok(self.insert(t));
                }
            }
        }
        let table = build_inverse_cdf_table(spec, grid_size, cfg)?;
        if let Some(path) = self.cached_path(spec, grid_size) {
            // a read-only cache directory is not an error
            let _ = save_table(&table, &path);
        }
        Ok(self.insert(table))
    }
}

pub fn load_table(path: &Path) -> Result<InverseCdfTable> {
    InverseCdfTable::read_csv(BufReader::new(File::open(path)?))
}

pub fn save_table(table: &InverseCdfTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    table.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}
