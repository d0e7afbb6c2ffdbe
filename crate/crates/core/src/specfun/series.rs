use super::gamma::{ln_abs_rgamma, rgamma};
use super::SeriesConfig;

/// Sequential generator of `x^n / (n!)^k * 1/Γ(a n + b)` for k = 0 or 1.
///
/// The power part is carried as a running product (and a running log for
/// when it leaves the f64 range); 1/Γ is evaluated directly while it is
/// representable. Calls must come in order n = 0, 1, 2, …
pub(crate) struct GammaSeriesTerms {
    x: f64,
    a: f64,
    b: f64,
    factorial: bool,
    pow: f64,
    ln_pow: f64,
    sign: f64,
}

impl GammaSeriesTerms {
    pub fn new(x: f64, a: f64, b: f64, factorial: bool) -> Self {
        Self {
            x,
            a,
            b,
            factorial,
            pow: 1.0,
            ln_pow: 0.0,
            sign: 1.0,
        }
    }

    pub fn term(&mut self, n: usize) -> f64 {
        if n > 0 {
            let div = if self.factorial { n as f64 } else { 1.0 };
            self.pow *= self.x.abs() / div;
            self.ln_pow += self.x.abs().ln() - div.ln();
            if self.x < 0.0 {
                self.sign = -self.sign;
            }
        }
        let arg = self.a * n as f64 + self.b;
        let direct = arg.abs() < 160.0 && self.pow.is_normal();
        if direct {
            return self.sign * self.pow * rgamma(arg);
        }
        let (ln_rg, s) = ln_abs_rgamma(arg);
        if s == 0.0 {
            return 0.0;
        }
        self.sign * s * (self.ln_pow + ln_rg).exp()
    }
}

/// Loss of significance tolerated in an alternating series before the
/// caller should prefer another route: sum(|term|) / |sum|.
pub(crate) const MAX_CANCELLATION: f64 = 1e3;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: f64,
    pub abs_sum: f64,
}

impl SeriesSum {
    pub fn cancellation(&self) -> f64 {
        if self.value == 0.0 {
            if self.abs_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.abs_sum / self.value.abs()
        }
    }

    pub fn is_trustworthy(&self) -> bool {
        self.cancellation() <= MAX_CANCELLATION
    }
}

pub(crate) enum SeriesOutcome {
    Converged(SeriesSum),
    /// Ran out of terms or produced a non-finite term.
    Exhausted {
        terms: usize,
    },
}

/// Neumaier-compensated summation of `term(0) + term(1) + …`.
///
/// Stops after three consecutive negligible terms. A single term that is
/// tiny only because 1/Γ sits at or next to a pole is not mistaken for
/// convergence since its neighbours are not.
pub(crate) fn sum_series(mut term: impl FnMut(usize) -> f64, cfg: &SeriesConfig) -> SeriesOutcome {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut small_run = 0usize;
    for n in 0..cfg.max_terms {
        let t = term(n);
        if !t.is_finite() {
            return SeriesOutcome::Exhausted { terms: n };
        }
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
        abs_sum += t.abs();
        let partial = (sum + comp).abs();
        if t.abs() < cfg.term_tolerance * partial.max(1.0) {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            return SeriesOutcome::Converged(SeriesSum {
                value: sum + comp,
                abs_sum,
            });
        }
    }
    SeriesOutcome::Exhausted {
        terms: cfg.max_terms,
    }
}
