//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
//! below. Runs as its own binary (no libtest harness) so the lines print in
//! order; exits non-zero when any criterion fails.

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use selfdecomp::distributions::{DistributionSpec, TableStore};
use selfdecomp::specfun::{m_wright, MWrightParams, SeriesConfig};
use selfdecomp::verify::{
    characterization_iteration, laplace_pair_check, limit_beta_zero_check, stable_moment_check,
    verify_exponential_decomposition, verify_gamma_decomposition, verify_gaussian_decomposition,
    CharacterizationKind, VerificationReport, VerifyConfig,
};

const BETAS: [f64; 3] = [0.2, 0.5, 0.8];
const GAMMA_SETS: [(f64, f64); 6] = [
    (0.5, 0.3),
    (0.5, 0.7),
    (1.0, 0.3),
    (1.0, 0.7),
    (2.5, 0.3),
    (2.5, 0.7),
];
const GAUSSIAN_ALPHAS: [f64; 3] = [0.3, 0.5, 0.7];

const CONVOLUTION_TOL: f64 = 1e-6;
const REGISTRY_TOL: f64 = 1e-12;
const DENSITY_FORMS_TOL: f64 = 1e-10;
const MELLIN_TOL: f64 = 1e-6;
const NORMALIZATION_TOL: f64 = 1e-8;
const LAPLACE_TOL: f64 = 1e-8;
const REMARK_TOL: f64 = 1e-7;
const CONTRACTION_TOL: f64 = 1e-14;
const ORBIT_TOL: f64 = 1e-10;
const GAUSSIAN_LIMIT_TOL: f64 = 1e-10;
const MOMENT_SE: f64 = 4.0;
const HALF_ORDER_TOL: f64 = 1e-10;
const THIRD_ORDER_AT_ZERO_TOL: f64 = 1e-12;
/// 1/Γ(2/3) to 20 digits.
const RGAMMA_TWO_THIRDS: f64 = 0.73848811162164831294;

const KS_LEVEL: f64 = 0.01;
const MC_N: usize = 200_000;
const MC_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
/// At least 13 of every 15 seed-runs must pass.
const MC_PASS_FRACTION: f64 = 13.0 / 15.0;

const EXP_BUDGET: Duration = Duration::from_secs(30);
const GAMMA_BUDGET: Duration = Duration::from_secs(120);

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn metric(r: &VerificationReport, name: &str) -> f64 {
    r.sub_check(name)
        .and_then(|s| s.get("metric"))
        .and_then(|m| m.as_f64())
        .unwrap_or(f64::INFINITY)
}

fn analytic_cfg() -> VerifyConfig {
    VerifyConfig {
        skip_monte_carlo: true,
        ..VerifyConfig::default()
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let cfg = analytic_cfg();
    let (mut conv, mut reg, mut points_ok) = (0.0f64, 0.0f64, true);
    for &b in &BETAS {
        match verify_exponential_decomposition(b, &cfg) {
            Ok(r) => {
                conv = conv.max(metric(&r, "convolution"));
                reg = reg.max(metric(&r, "registry"));
                let n = r
                    .sub_check("registry")
                    .and_then(|s| s["points"].as_array().map(Vec::len));
                points_ok &= n == Some(5);
            }
            Err(_) => conv = f64::INFINITY,
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: conv <= CONVOLUTION_TOL && reg <= REGISTRY_TOL && points_ok && t < EXP_BUDGET,
        summary: format!(
            "exponential: convolution sup-error {conv:.2e} (<= {CONVOLUTION_TOL:e}), registry {reg:.2e} (<= {REGISTRY_TOL:e}) at 5 z, {:.1} s (< {} s)",
            t.as_secs_f64(),
            EXP_BUDGET.as_secs()
        ),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let cfg = analytic_cfg();
    let (mut conv, mut reg, mut errors) = (0.0f64, 0.0f64, 0);
    for &(r, a) in &GAMMA_SETS {
        let residual = DistributionSpec::foxh_residual(r, a).unwrap();
        if TableStore::global()
            .get_or_build(residual, cfg.table_grid, &cfg.quad)
            .is_err()
        {
            errors += 1;
        }
        match verify_gamma_decomposition(r, a, &cfg) {
            Ok(rep) => {
                conv = conv.max(metric(&rep, "convolution"));
                reg = reg.max(metric(&rep, "registry"));
            }
            Err(_) => errors += 1,
        }
    }
    let t = start.elapsed();
    Outcome {
        pass: errors == 0 && conv <= CONVOLUTION_TOL && reg <= REGISTRY_TOL && t < GAMMA_BUDGET,
        summary: format!(
            "gamma: convolution sup-error {conv:.2e}, registry {reg:.2e}, {errors} errors, {:.1} s including {} table builds (< {} s)",
            t.as_secs_f64(),
            GAMMA_SETS.len(),
            GAMMA_BUDGET.as_secs()
        ),
    }
}

fn criterion_3() -> Outcome {
    let cfg = analytic_cfg();
    let (mut forms, mut mellin, mut norm, mut grid_ok) = (0.0f64, 0.0f64, 0.0f64, true);
    let mut compared = u64::MAX;
    for &a in &GAUSSIAN_ALPHAS {
        match verify_gaussian_decomposition(a, &cfg) {
            Ok(r) => {
                forms = forms.max(metric(&r, "density_forms"));
                mellin = mellin.max(metric(&r, "numeric_mellin"));
                norm = norm.max(metric(&r, "normalization"));
                let forms_details = r.sub_check("density_forms");
                grid_ok &= forms_details.and_then(|s| s["grid"]["points"].as_u64()) == Some(40);
                compared = compared.min(
                    forms_details
                        .and_then(|s| s["compared"].as_u64())
                        .unwrap_or(0),
                );
            }
            Err(_) => forms = f64::INFINITY,
        }
    }
    Outcome {
        pass: forms <= DENSITY_FORMS_TOL && mellin <= MELLIN_TOL && norm <= NORMALIZATION_TOL && grid_ok,
        summary: format!(
            "gaussian: closed forms agree to {forms:.2e} (<= {DENSITY_FORMS_TOL:e}) on 40 points ({compared}+ above the 1e-12 clip), numeric Mellin {mellin:.2e} (<= {MELLIN_TOL:e}), |∫ρ - 1| {norm:.2e} (<= {NORMALIZATION_TOL:e})"
        ),
    }
}

fn criterion_4() -> Outcome {
    let cfg_for = |seed| VerifyConfig {
        skip_analytic: true,
        ks_level: KS_LEVEL,
        n: MC_N,
        seed,
        ..VerifyConfig::default()
    };
    let tally = |runs: Vec<Result<VerificationReport, selfdecomp::Error>>| -> (usize, usize) {
        let total = runs.len();
        (
            runs.into_iter()
                .filter(|r| matches!(r, Ok(r) if r.pass))
                .count(),
            total,
        )
    };
    let start = Instant::now();
    let exp = tally(
        MC_SEEDS
            .iter()
            .flat_map(|&s| BETAS.iter().map(move |&b| (s, b)))
            .map(|(s, b)| verify_exponential_decomposition(b, &cfg_for(s)))
            .collect(),
    );
    let gamma = tally(
        MC_SEEDS
            .iter()
            .flat_map(|&s| GAMMA_SETS.iter().map(move |&p| (s, p)))
            .map(|(s, (r, a))| verify_gamma_decomposition(r, a, &cfg_for(s)))
            .collect(),
    );
    let gauss = tally(
        MC_SEEDS
            .iter()
            .flat_map(|&s| GAUSSIAN_ALPHAS.iter().map(move |&a| (s, a)))
            .map(|(s, a)| verify_gaussian_decomposition(a, &cfg_for(s)))
            .collect(),
    );
    let enough = |(p, n): (usize, usize)| p as f64 >= MC_PASS_FRACTION * n as f64 - 1e-9;
    Outcome {
        pass: enough(exp) && enough(gamma) && enough(gauss),
        summary: format!(
            "KS at level {KS_LEVEL}, n = m = {MC_N}, seeds 1..5: exponential {}/{}, gamma {}/{}, gaussian {}/{} (each needs >= 13/15 of its runs), {:.1} s",
            exp.0, exp.1, gamma.0, gamma.1, gauss.0, gauss.1,
            start.elapsed().as_secs_f64()
        ),
    }
}

fn criterion_5() -> Outcome {
    let cfg = VerifyConfig::default();
    let mut lt = 0.0f64;
    for &b in &BETAS {
        lt = lt.max(
            laplace_pair_check(b, &[0.5, 1.0, 2.0], &cfg)
                .map_or(f64::INFINITY, |r| metric(&r, "laplace_transform")),
        );
    }
    let mut remark = 0.0f64;
    for &b in &[0.3, 0.7] {
        remark = remark.max(
            laplace_pair_check(b, &[0.5, 2.0], &cfg)
                .map_or(f64::INFINITY, |r| metric(&r, "remark_identity")),
        );
    }
    Outcome {
        pass: lt <= LAPLACE_TOL && remark <= REMARK_TOL,
        summary: format!(
            "Laplace transform of M_β: {lt:.2e} (<= {LAPLACE_TOL:e}); ∫e^(-x) E_β(-x^β t) dx = 1/(1+t): {remark:.2e} (<= {REMARK_TOL:e})"
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut kinds: Vec<CharacterizationKind> = BETAS
        .iter()
        .map(|&beta| CharacterizationKind::Exponential { beta })
        .collect();
    kinds.extend(
        GAMMA_SETS
            .iter()
            .map(|&(r, alpha)| CharacterizationKind::Gamma { r, alpha }),
    );
    kinds.extend(
        GAUSSIAN_ALPHAS
            .iter()
            .map(|&alpha| CharacterizationKind::Gaussian { alpha }),
    );
    let starts = [
        Complex64::new(3.0, 0.0),
        Complex64::new(2.0, 1.5),
        Complex64::new(6.0, -4.0),
    ];
    let (mut contraction, mut constancy, mut limit) = (0.0f64, 0.0f64, 0.0f64);
    for kind in kinds {
        for z0 in starts {
            match characterization_iteration(kind, z0, 40) {
                Ok(t) => {
                    contraction = contraction.max(t.contraction_error);
                    constancy = constancy.max(t.h_deviation);
                    if let CharacterizationKind::Gaussian { .. } = kind {
                        let last = t.h_values.last().copied().unwrap_or_default();
                        limit = limit.max((last - 1.0 / PI.sqrt()).norm());
                    }
                }
                Err(_) => contraction = f64::INFINITY,
            }
        }
    }
    Outcome {
        pass: contraction <= CONTRACTION_TOL && constancy <= ORBIT_TOL && limit <= GAUSSIAN_LIMIT_TOL,
        summary: format!(
            "orbits: contraction {contraction:.2e} (<= {CONTRACTION_TOL:e}), h-constancy {constancy:.2e} (<= {ORBIT_TOL:e}), gaussian limit 1/√π to {limit:.2e} (<= {GAUSSIAN_LIMIT_TOL:e})"
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    for &b in &[0.3, 0.6] {
        worst = worst.max(
            stable_moment_check(b, &[1.5, 2.0, 2.5], MC_N, 1, MOMENT_SE)
                .map_or(f64::INFINITY, |r| r.metric),
        );
    }
    Outcome {
        pass: worst <= MOMENT_SE,
        summary: format!(
            "moments of S_β^(-β), β in {{0.3, 0.6}}, z in {{1.5, 2, 2.5}}, n = {MC_N}: worst {worst:.2} standard errors (<= {MOMENT_SE})"
        ),
    }
}

fn criterion_8() -> Outcome {
    let cfg = SeriesConfig::default();
    let half = MWrightParams::new(0.5).unwrap();
    let mut err = 0.0f64;
    for i in 0..=1000 {
        let t = 0.01 * i as f64;
        let exact = (-t * t / 4.0).exp() / PI.sqrt();
        err = err.max(m_wright(half, t, &cfg).map_or(f64::INFINITY, |v| (v - exact).abs()));
    }
    let third = m_wright(MWrightParams::new(1.0 / 3.0).unwrap(), 0.0, &cfg)
        .map_or(f64::INFINITY, |v| (v - RGAMMA_TWO_THIRDS).abs());
    let inversions = limit_beta_zero_check(&[0.4, 0.2, 0.1, 0.05], 100_000, 1)
        .map_or(f64::INFINITY, |r| r.metric);
    Outcome {
        pass: err <= HALF_ORDER_TOL && third <= THIRD_ORDER_AT_ZERO_TOL && inversions == 0.0,
        summary: format!(
            "M_1/2 vs e^(-t²/4)/√π on [0, 10]: {err:.2e} (<= {HALF_ORDER_TOL:e}); M_1/3(0) vs 1/Γ(2/3): {third:.2e} (<= {THIRD_ORDER_AT_ZERO_TOL:e}); β → 0 KS inversions: {inversions}"
        ),
    }
}

fn main() {
    // `cargo test -- --list` and filters come through here too
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [Criterion; 8] = [
        ("exponential decomposition", criterion_1),
        ("gamma decomposition", criterion_2),
        ("gaussian decomposition", criterion_3),
        ("Monte Carlo product laws", criterion_4),
        ("Laplace pairs", criterion_5),
        ("characterization orbits", criterion_6),
        ("stable representation", criterion_7),
        ("special values and β → 0 limit", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {} ({name}): {} [{:.1} s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
