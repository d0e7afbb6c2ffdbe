//! Command-line front end: `eval`, `mellin`, `sample`, `table` and
//! `verify (exp | gamma | gaussian | laplace | characterize | limit)`.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage error,
//! 3 numerical failure. Numbers are written with 17 significant digits.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::distributions::{
    pdf, read_samples_csv, sample, sample_half_normal, write_samples_csv, DistributionSpec,
    HalfNormalMethod, InverseCdfTable, TableStore,
};
use crate::error::Error;
use crate::mellin::{
    analytic_mellin, mellin_of_power, numeric_mellin, strip_of, MellinValue, PowerDensity,
    QuadratureConfig,
};
use crate::specfun::{generalized_mittag_leffler, SeriesConfig};
use crate::verify::{self, CharacterizationKind, VerificationReport, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "selfdecomp",
    version,
    about = "Multiplicative self-decompositions of the exponential, gamma and half-normal laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a density (or E_{α,μ}(-t) for `--family ml`) on a grid.
    Eval(EvalArgs),
    /// Mellin transform, closed form or by quadrature.
    Mellin(MellinArgs),
    /// Seeded draws from a family.
    Sample(SampleArgs),
    /// Build an inverse-CDF table.
    Table(TableArgs),
    /// Run a verification and print its report.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(alias = "exponential")]
    Exp,
    Gamma,
    Weibull,
    Stable,
    #[value(alias = "m-wright")]
    Mwright,
    Foxh,
    Gaussres,
    #[value(alias = "half-normal")]
    Halfnormal,
    /// Mittag-Leffler E_{α,μ}(-t); `eval` only.
    #[value(alias = "mittag-leffler")]
    Ml,
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Weibull shape.
    #[arg(long)]
    k: Option<f64>,
    /// Second Mittag-Leffler parameter (default 1).
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
struct TolArgs {
    /// Absolute quadrature tolerance.
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    tol_rel: Option<f64>,
}

impl TolArgs {
    fn quad(&self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            abs_tol: self.tol_abs.unwrap_or(d.abs_tol),
            rel_tol: self.tol_rel.unwrap_or(d.rel_tol),
            ..d
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("grid").required(true).args(["points", "log_points"])))]
struct EvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Linear grid `start:stop:step`.
    #[arg(long)]
    points: Option<String>,
    /// `n a b`: n log-spaced points from a to b.
    #[arg(long, num_args = 3, value_names = ["N", "A", "B"], allow_negative_numbers = true)]
    log_points: Option<Vec<String>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MellinMethodArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Args)]
struct MellinArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Complex argument `re+imi`; repeat for several.
    #[arg(long, required = true, allow_hyphen_values = true)]
    z: Vec<String>,
    /// Transform of X^a instead of X.
    #[arg(long)]
    power: Option<f64>,
    #[arg(long, value_enum, default_value_t = MellinMethodArg::Closed)]
    method: MellinMethodArg,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HalfNormalArg {
    Fold,
    Gamma,
}

impl From<HalfNormalArg> for HalfNormalMethod {
    fn from(m: HalfNormalArg) -> Self {
        match m {
            HalfNormalArg::Fold => HalfNormalMethod::Fold,
            HalfNormalArg::Gamma => HalfNormalMethod::Gamma,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct SampleArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Knots of the inverse-CDF table for the residual laws.
    #[arg(long, default_value_t = 4096)]
    grid_size: usize,
    /// Half-normal construction.
    #[arg(long, value_enum, default_value_t = HalfNormalArg::Fold)]
    method: HalfNormalArg,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
struct TableArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 4096)]
    grid_size: usize,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
struct VerifyCommon {
    #[arg(long, default_value_t = 200_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Knots of the residual inverse-CDF tables.
    #[arg(long, default_value_t = 4096)]
    grid_size: usize,
    /// Reference batch (CSV with a `value` column) replacing the in-process one.
    #[arg(long)]
    from_file: Option<PathBuf>,
    /// Only the deterministic sub-checks.
    #[arg(long)]
    no_monte_carlo: bool,
    #[command(flatten)]
    tol: TolArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Exp,
    Gamma,
    Gaussian,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Y0 = Y0^β Y_β.
    Exp {
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        common: VerifyCommon,
    },
    /// Z_r = Z_r^α Y_{α,r}.
    Gamma {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        alpha: f64,
        /// Use a Fox H residual with this r instead (a deliberate mismatch).
        #[arg(long)]
        residual_r: Option<f64>,
        #[command(flatten)]
        common: VerifyCommon,
    },
    /// |U| = |U|^α X_α.
    Gaussian {
        #[arg(long)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = HalfNormalArg::Fold)]
        method: HalfNormalArg,
        #[command(flatten)]
        common: VerifyCommon,
    },
    /// Laplace pairs of M_β.
    Laplace {
        #[arg(long)]
        beta: f64,
        /// Comma-separated s-values.
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        s: Vec<f64>,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Orbit of the characterization functional equation.
    Characterize {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 40)]
        steps: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// KS distance of M-Wright(β) to Exp(1) as β decreases.
    Limit {
        #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.2, 0.1, 0.05])]
        betas: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        from_file: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Failure of a subcommand: bad usage (with the subcommand path for the
/// help text) or an error from the library.
enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            // the offending flag is in clap's message; follow it with the schema
            let words: Vec<String> = argv
                .iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned())
                .take_while(|a| !a.starts_with('-'))
                .collect();
            let path: Vec<&str> = words.iter().map(String::as_str).collect();
            if !path.is_empty() {
                eprintln!("\n{}", subcommand_help(&path));
            }
            return EXIT_USAGE;
        }
    };
    let path = subcommand_path(&cli.command);
    let outcome = match cli.command {
        Command::Eval(a) => eval(a),
        Command::Mellin(a) => mellin(a),
        Command::Sample(a) => sample_cmd(a),
        Command::Table(a) => table(a),
        Command::Verify(v) => verify_cmd(v),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n");
            eprintln!("{}", subcommand_help(&path));
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn subcommand_path(c: &Command) -> Vec<&'static str> {
    match c {
        Command::Eval(_) => vec!["eval"],
        Command::Mellin(_) => vec!["mellin"],
        Command::Sample(_) => vec!["sample"],
        Command::Table(_) => vec!["table"],
        Command::Verify(v) => vec![
            "verify",
            match v {
                VerifyCommand::Exp { .. } => "exp",
                VerifyCommand::Gamma { .. } => "gamma",
                VerifyCommand::Gaussian { .. } => "gaussian",
                VerifyCommand::Laplace { .. } => "laplace",
                VerifyCommand::Characterize { .. } => "characterize",
                VerifyCommand::Limit { .. } => "limit",
            },
        ],
    }
}

fn subcommand_help(path: &[&str]) -> String {
    fn descend(cmd: &mut clap::Command, path: &[&str]) -> String {
        match path.split_first() {
            Some((name, rest)) if cmd.find_subcommand(name).is_some() => {
                descend(cmd.find_subcommand_mut(name).expect("checked above"), rest)
            }
            _ => cmd.render_help().to_string(),
        }
    }
    let mut cmd = Cli::command().bin_name("selfdecomp");
    cmd.build();
    descend(&mut cmd, path)
}

fn required(v: Option<f64>, flag: &str, family: &str) -> std::result::Result<f64, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required for {family}")))
}

fn spec_of(f: &FamilyArgs) -> std::result::Result<DistributionSpec, Failure> {
    let name = format!("--family {:?}", f.family).to_lowercase();
    let spec = match f.family {
        Family::Exp => DistributionSpec::Exponential,
        Family::Gamma => DistributionSpec::gamma(required(f.r, "r", &name)?)?,
        Family::Weibull => DistributionSpec::weibull(required(f.k, "k", &name)?)?,
        Family::Stable => DistributionSpec::one_sided_stable(required(f.beta, "beta", &name)?)?,
        Family::Mwright => DistributionSpec::m_wright(required(f.beta, "beta", &name)?)?,
        Family::Foxh => DistributionSpec::foxh_residual(
            required(f.r, "r", &name)?,
            required(f.alpha, "alpha", &name)?,
        )?,
        Family::Gaussres => {
            DistributionSpec::gaussian_residual(required(f.alpha, "alpha", &name)?)?
        }
        Family::Halfnormal => DistributionSpec::HalfNormal,
        Family::Ml => return Err(usage("--family ml is only available for `eval`")),
    };
    Ok(spec)
}

/// `start:stop:step`, stop included up to rounding.
fn parse_points(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("--points expects start:stop:step, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(usage(format!(
            "--points needs step > 0 and stop >= start, got `{s}`"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(usage("--points describes more than 1e7 points"));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn parse_log_points(v: &[String]) -> std::result::Result<Vec<f64>, Failure> {
    let bad = || {
        usage(format!(
            "--log-points expects `n a b` with n >= 2 and 0 < a < b, got {v:?}"
        ))
    };
    let n: usize = v[0].parse().map_err(|_| bad())?;
    let a: f64 = v[1].parse().map_err(|_| bad())?;
    let b: f64 = v[2].parse().map_err(|_| bad())?;
    if n < 2 || !(a > 0.0 && b > a && b.is_finite()) {
        return Err(bad());
    }
    Ok(verify::log_grid(a, b, n))
}

/// Parses `re+imi`, `re-imi`, `re`, `imi`, `i`.
pub fn parse_complex(s: &str) -> crate::Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("`{s}` is not a complex number like 1.5+2i"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |p: &str| -> crate::Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(j) => {
            let re: f64 = body[..j].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[j..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_output(out: &OutputArgs, text: &str) -> std::result::Result<(), Failure> {
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn json_text(v: &impl serde::Serialize) -> std::result::Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn family_params(f: &FamilyArgs) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in [
        ("beta", f.beta),
        ("alpha", f.alpha),
        ("r", f.r),
        ("k", f.k),
        ("mu", f.mu),
    ] {
        if let Some(v) = v {
            m.insert(k.into(), json!(v));
        }
    }
    Value::Object(m)
}

fn eval(a: EvalArgs) -> CmdResult {
    let grid = match (&a.points, &a.log_points) {
        (Some(p), _) => parse_points(p)?,
        (None, Some(l)) => parse_log_points(l)?,
        (None, None) => return Err(usage("one of --points or --log-points is required")),
    };
    let values: Vec<f64> = if a.family.family == Family::Ml {
        let alpha = required(a.family.alpha.or(a.family.beta), "alpha", "--family ml")?;
        let mu = a.family.mu.unwrap_or(1.0);
        let cfg = SeriesConfig::default();
        grid.iter()
            .map(|&t| generalized_mittag_leffler(alpha, mu, t, &cfg))
            .collect::<crate::Result<_>>()?
    } else {
        let spec = spec_of(&a.family)?;
        grid.iter()
            .map(|&t| pdf(spec, t))
            .collect::<crate::Result<_>>()?
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,value\n");
            for (t, v) in grid.iter().zip(&values) {
                s.push_str(&format!("{},{}\n", num(*t), num(*v)));
            }
            s
        }
        Format::Json => json_text(&json!({
            "family": format!("{:?}", a.family.family).to_lowercase(),
            "params": family_params(&a.family),
            "points": grid.iter().zip(&values)
                .map(|(t, v)| json!({ "t": t, "value": v })).collect::<Vec<_>>(),
        }))?,
    };
    write_output(&a.output, &text)?;
    Ok(EXIT_OK)
}

fn mellin(a: MellinArgs) -> CmdResult {
    let spec = spec_of(&a.family)?;
    let zs: Vec<Complex64> =
        a.z.iter()
            .map(|s| parse_complex(s))
            .collect::<crate::Result<_>>()
            .map_err(|e| usage(e.to_string()))?;
    let quad = a.tol.quad();
    let mut rows: Vec<MellinValue> = Vec::new();
    for &z in &zs {
        if matches!(a.method, MellinMethodArg::Closed | MellinMethodArg::Both) {
            rows.push(match a.power {
                Some(p) => mellin_of_power(spec, p, z)?,
                None => analytic_mellin(spec, z)?,
            });
        }
        if matches!(a.method, MellinMethodArg::Numeric | MellinMethodArg::Both) {
            rows.push(match a.power {
                Some(p) => {
                    let d = PowerDensity::new(spec, p)?;
                    numeric_mellin(&d, z, strip_of(spec).pulled_back(p), &quad)?
                }
                None => numeric_mellin(&spec, z, strip_of(spec), &quad)?,
            });
        }
    }
    let method = |m: &MellinValue| match m.method {
        crate::mellin::MellinMethod::ClosedForm => "closed_form",
        crate::mellin::MellinMethod::Quadrature => "quadrature",
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("z_re,z_im,method,value_re,value_im,error_estimate\n");
            for m in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    num(m.z.re),
                    num(m.z.im),
                    method(m),
                    num(m.value.re),
                    num(m.value.im),
                    num(m.error)
                ));
            }
            s
        }
        Format::Json => json_text(&json!({
            "spec": spec,
            "power": a.power,
            "values": rows.iter().map(|m| json!({
                "z": [m.z.re, m.z.im],
                "value": [m.value.re, m.value.im],
                "method": method(m),
                "error_estimate": m.error,
                "strip": m.strip,
            })).collect::<Vec<_>>(),
        }))?,
    };
    write_output(&a.output, &text)?;
    Ok(EXIT_OK)
}

fn ensure_table(
    spec: DistributionSpec,
    grid: usize,
    quad: &QuadratureConfig,
) -> crate::Result<std::sync::Arc<InverseCdfTable>> {
    TableStore::global().get_or_build(spec, grid, quad)
}

fn sample_cmd(a: SampleArgs) -> CmdResult {
    let spec = spec_of(&a.family)?;
    if a.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let batch = if spec == DistributionSpec::HalfNormal {
        sample_half_normal(a.n, a.seed, a.method.into())?
    } else {
        if spec.needs_table() {
            ensure_table(spec, a.grid_size, &a.tol.quad())?;
        }
        sample(spec, a.n, a.seed)?
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_samples_csv(&mut buf, &batch.values)?;
            String::from_utf8(buf).expect("ASCII output")
        }
        Format::Json => json_text(&batch)?,
    };
    write_output(&a.output, &text)?;
    Ok(EXIT_OK)
}

fn table(a: TableArgs) -> CmdResult {
    let spec = spec_of(&a.family)?;
    let t = ensure_table(spec, a.grid_size, &a.tol.quad())?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            t.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ASCII output")
        }
        Format::Json => {
            let (head, tail) = t.tail_exponents();
            json_text(&json!({
                "spec": spec,
                "head_exponent": head,
                "tail_rate": tail,
                "probabilities": t.probabilities(),
                "quantiles": t.quantiles(),
                "densities": t.densities(),
            }))?
        }
    };
    write_output(&a.output, &text)?;
    Ok(EXIT_OK)
}

fn read_reference(path: &Option<PathBuf>) -> std::result::Result<Option<Vec<f64>>, Failure> {
    match path {
        None => Ok(None),
        Some(p) => {
            let f =
                File::open(p).map_err(|e| usage(format!("--from-file {}: {e}", p.display())))?;
            Ok(Some(
                read_samples_csv(BufReader::new(f)).map_err(|e| usage(e.to_string()))?,
            ))
        }
    }
}

fn config_from(common: &VerifyCommon) -> std::result::Result<VerifyConfig, Failure> {
    Ok(VerifyConfig {
        n: common.n,
        seed: common.seed,
        table_grid: common.grid_size,
        quad: common.tol.quad(),
        reference: read_reference(&common.from_file)?,
        skip_monte_carlo: common.no_monte_carlo,
        ..VerifyConfig::default()
    })
}

fn emit_report(r: &VerificationReport, out: &OutputArgs) -> CmdResult {
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => json_text(r)?,
        Format::Csv => format!(
            "test_id,metric,threshold,pass\n{},{},{},{}\n",
            r.test_id,
            num(r.metric),
            num(r.threshold),
            r.pass
        ),
    };
    write_output(out, &text)?;
    Ok(if r.pass {
        EXIT_OK
    } else if r.numerical_failure() {
        EXIT_NUMERICAL
    } else {
        EXIT_FAIL
    })
}

fn verify_cmd(v: VerifyCommand) -> CmdResult {
    match v {
        VerifyCommand::Exp { beta, common } => {
            let cfg = config_from(&common)?;
            emit_report(
                &verify::verify_exponential_decomposition(beta, &cfg)?,
                &common.output,
            )
        }
        VerifyCommand::Gamma {
            r,
            alpha,
            residual_r,
            common,
        } => {
            let cfg = config_from(&common)?;
            let report = match residual_r {
                Some(r2) => verify::verify_gamma_decomposition_with_residual(
                    r,
                    alpha,
                    DistributionSpec::foxh_residual(r2, alpha)?,
                    &cfg,
                )?,
                None => verify::verify_gamma_decomposition(r, alpha, &cfg)?,
            };
            emit_report(&report, &common.output)
        }
        VerifyCommand::Gaussian {
            alpha,
            method,
            common,
        } => {
            let cfg = VerifyConfig {
                half_normal: method.into(),
                ..config_from(&common)?
            };
            emit_report(
                &verify::verify_gaussian_decomposition(alpha, &cfg)?,
                &common.output,
            )
        }
        VerifyCommand::Laplace {
            beta,
            s,
            tol,
            output,
        } => {
            let cfg = VerifyConfig {
                quad: tol.quad(),
                ..VerifyConfig::default()
            };
            emit_report(&verify::laplace_pair_check(beta, &s, &cfg)?, &output)
        }
        VerifyCommand::Characterize {
            kind,
            beta,
            alpha,
            r,
            z,
            steps,
            tol,
            output,
        } => {
            let z0 = parse_complex(&z).map_err(|e| usage(e.to_string()))?;
            let kind = match kind {
                Kind::Exp => CharacterizationKind::Exponential {
                    beta: required(beta.or(alpha), "beta", "--kind exp")?,
                },
                Kind::Gamma => CharacterizationKind::Gamma {
                    r: required(r, "r", "--kind gamma")?,
                    alpha: required(alpha, "alpha", "--kind gamma")?,
                },
                Kind::Gaussian => CharacterizationKind::Gaussian {
                    alpha: required(alpha, "alpha", "--kind gaussian")?,
                },
            };
            let cfg = VerifyConfig {
                quad: tol.quad(),
                ..VerifyConfig::default()
            };
            emit_report(
                &verify::verify_characterization(kind, z0, steps, &cfg)?,
                &output,
            )
        }
        VerifyCommand::Limit {
            betas,
            n,
            seed,
            from_file,
            output,
        } => {
            let report = match read_reference(&from_file)? {
                Some(reference) => {
                    verify::limit_beta_zero_check_against(&betas, &reference, n, seed)?
                }
                None => verify::limit_beta_zero_check(&betas, n, seed)?,
            };
            emit_report(&report, &output)
        }
    }
}
