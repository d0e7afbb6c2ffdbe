//! Seeded samplers.
//!
//! Draws are produced in chunks of [`CHUNK`]; chunk `i` uses a ChaCha8
//! generator seeded with the user seed on stream `i`. The chunks are
//! independent, so the result is the same whether they run sequentially
//! or on a rayon pool of any size.

use std::io::{BufRead, Write};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{InverseCdfTable, TableStore};
use super::DistributionSpec;
use crate::error::{Error, Result};
use crate::specfun::sin_pi;

const CHUNK: usize = 4096;

/// A reproducible batch of draws from one distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub spec: DistributionSpec,
    pub seed: u64,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// How the half-normal law is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HalfNormalMethod {
    /// |N(0, 1)|.
    #[default]
    Fold,
    /// sqrt(2 G) with G ~ Gamma(1/2), since U²/2 is gamma(1/2).
    Gamma,
}

fn open01(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(Open01)
}

/// ln A(πu) for Kanter's function
/// `A(φ) = [sin(βφ)^β sin((1-β)φ)^{1-β} / sin φ]^{1/(1-β)}`.
fn kanter_ln_a(beta: f64, u: f64) -> f64 {
    let q = 1.0 - beta;
    (beta * sin_pi(beta * u).ln() + q * sin_pi(q * u).ln() - sin_pi(u).ln()) / q
}

/// `ln A - ln E` for one Kanter draw; S_β = exp((1-β)/β · this).
fn kanter_log_ratio(beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u = open01(rng);
    let e = -open01(rng).ln();
    kanter_ln_a(beta, u) - e.ln()
}

enum Drawer<'a> {
    Exponential,
    Weibull(f64),
    Gamma(Gamma<f64>),
    Stable(f64),
    MWright(f64),
    HalfNormal(HalfNormalMethod, Gamma<f64>),
    Table(&'a InverseCdfTable),
}

impl Drawer<'_> {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Drawer::Exponential => -open01(rng).ln(),
            Drawer::Weibull(k) => (-open01(rng).ln()).powf(1.0 / k),
            Drawer::Gamma(g) => g.sample(rng),
            Drawer::Stable(beta) => ((1.0 - beta) / beta * kanter_log_ratio(*beta, rng)).exp(),
            // S_β^{-β} = (E / A)^{1-β}
            Drawer::MWright(beta) => (-(1.0 - beta) * kanter_log_ratio(*beta, rng)).exp(),
            Drawer::HalfNormal(HalfNormalMethod::Fold, _) => {
                let z: f64 = StandardNormal.sample(rng);
                z.abs()
            }
            Drawer::HalfNormal(HalfNormalMethod::Gamma, g) => (2.0 * g.sample(rng)).sqrt(),
            Drawer::Table(t) => t.quantile(open01(rng)),
        }
    }
}

fn gamma_dist(r: f64) -> Result<Gamma<f64>> {
    Gamma::new(r, 1.0).map_err(|e| Error::Domain(format!("gamma sampler: {e}")))
}

fn draw_batch(drawer: &Drawer<'_>, n: usize, seed: u64) -> Vec<f64> {
    let chunks = n.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| drawer.draw(&mut rng)).collect()
        })
        .collect();
    per_chunk.concat()
}

fn run(
    spec: DistributionSpec,
    n: usize,
    seed: u64,
    store: &TableStore,
    half_normal: HalfNormalMethod,
) -> Result<SampleBatch> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let table;
    let drawer = match spec {
        DistributionSpec::Exponential => Drawer::Exponential,
        DistributionSpec::Weibull { k } => Drawer::Weibull(k),
        DistributionSpec::Gamma { r } => Drawer::Gamma(gamma_dist(r)?),
        DistributionSpec::OneSidedStable { beta } => Drawer::Stable(beta),
        DistributionSpec::MWright { beta } => Drawer::MWright(beta),
        DistributionSpec::HalfNormal => Drawer::HalfNormal(half_normal, gamma_dist(0.5)?),
        DistributionSpec::FoxHResidual { .. } | DistributionSpec::GaussianResidual { .. } => {
            table = store
                .get(spec)
                .ok_or_else(|| Error::TableUnavailable(spec.to_string()))?;
            Drawer::Table(&table)
        }
    };
    Ok(SampleBatch {
        spec,
        seed,
        values: draw_batch(&drawer, n, seed),
    })
}

/// `n` draws from `spec`, reproducible from `seed`. Table-based families
/// look their table up in the process-wide [`TableStore::global`].
pub fn sample(spec: DistributionSpec, n: usize, seed: u64) -> Result<SampleBatch> {
    sample_with(spec, n, seed, TableStore::global())
}

/// [`sample`] with an explicit table store.
pub fn sample_with(
    spec: DistributionSpec,
    n: usize,
    seed: u64,
    store: &TableStore,
) -> Result<SampleBatch> {
    run(spec, n, seed, store, HalfNormalMethod::default())
}

/// Half-normal draws by the chosen construction.
pub fn sample_half_normal(n: usize, seed: u64, method: HalfNormalMethod) -> Result<SampleBatch> {
    run(
        DistributionSpec::HalfNormal,
        n,
        seed,
        TableStore::global(),
        method,
    )
}

/// One value per line under a `value` header, 17 significant digits.
pub fn write_samples_csv<W: Write>(mut w: W, values: &[f64]) -> Result<()> {
    writeln!(w, "value")?;
    for v in values {
        writeln!(w, "{v:.16e}")?;
    }
    Ok(())
}

/// Reads the format written by [`write_samples_csv`]; the first column of
/// any CSV with a header line is accepted.
pub fn read_samples_csv<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if i == 0 || line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("");
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: `{field}` is not a number", i + 1)))?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse("sample file holds no values".into()));
    }
    Ok(out)
}
