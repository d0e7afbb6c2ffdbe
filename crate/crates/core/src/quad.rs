//! Quadrature primitives shared by the special functions, the Mellin
//! machinery and the CDF tables.
//!
//! Three rules are provided:
//! - adaptive Gauss–Kronrod (10/21 points) with global bisection on a
//!   finite interval,
//! - tanh-sinh on a finite interval, for integrands whose mass piles up at
//!   an endpoint,
//! - exp-sinh on `[a, inf)`, for tails after the `x = e^u` substitution.
//!
//! All three are generic over [`QuadValue`] so complex Mellin integrands go
//! through the same code as real densities. Non-finite integrand values are
//! treated as zero only at the far ends of the double-exponential rules,
//! where the weights underflow anyway.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl<T: QuadValue> Integral<T> {
    fn tolerance_met(&self, abs_tol: f64, rel_tol: f64) -> bool {
        self.error <= abs_tol.max(rel_tol * self.value.magnitude())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Bisection depth for Gauss–Kronrod, step halvings for the DE rules.
    pub max_levels: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64, max_levels: usize) -> Self {
        Self {
            abs,
            rel,
            max_levels,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value)
    }
}

// ---------------------------------------------------------------------------
// Gauss–Kronrod 10/21

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_712_488_225_150,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], …, XGK[9]`.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    depth: usize,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut values = [(T::zero(), T::zero()); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        let (f1, f2) = values[j];
        asc += WGK[j] * ((f1 - mean).magnitude() + (f2 - mean).magnitude());
    }
    let result = kronrod * half;
    let resasc = asc * half.abs();
    let resabs = abs_sum * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    if !result.is_finite_value() {
        err = f64::INFINITY;
    }
    (result, err)
}

/// Adaptive Gauss–Kronrod on `[a, b]`, always bisecting the segment with the
/// largest error estimate.
pub fn gauss_kronrod<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Integral<T> {
    if a == b {
        return Integral {
            value: T::zero(),
            error: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = kronrod21(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    });
    let mut total = v;
    let mut total_err = e;
    let mut converged;
    loop {
        converged = total_err <= tol.target(total.magnitude());
        if converged || heap.len() >= MAX_SEGMENTS {
            break;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        if worst.depth >= tol.max_levels.max(1) * 3 || !worst.error.is_finite() && worst.depth > 60
        {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod21(&f, worst.a, mid);
        let (v2, e2) = kronrod21(&f, mid, worst.b);
        evaluations += 42;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            depth: worst.depth + 1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            depth: worst.depth + 1,
        });
        // refresh the running sums now and then to shed accumulated rounding
        if heap.len() % 64 == 0 {
            total = heap.iter().fold(T::zero(), |acc, s| acc + s.value);
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value = heap.iter().fold(T::zero(), |acc, s| acc + s.value);
    let error: f64 = heap.iter().map(|s| s.error).sum();
    let out = Integral {
        value,
        error,
        converged: false,
        evaluations,
    };
    Integral {
        converged: converged || out.tolerance_met(tol.abs, tol.rel),
        ..out
    }
}

/// Adaptive Gauss–Kronrod on `[a, inf)` through `u = a + t/(1-t)`.
///
/// Local bisection resolves sharp interior features (the super-exponential
/// cut-off of M_β for β near 1) that a double-exponential rule could only
/// resolve by refining everywhere. Non-finite values far out count as zero.
pub fn gauss_kronrod_semi_infinite<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    tol: Tolerance,
) -> Integral<T> {
    gauss_kronrod(
        |t: f64| {
            let s = 1.0 - t;
            let u = a + t / s;
            let v = f(u);
            if !v.is_finite_value() {
                return T::zero();
            }
            v * (1.0 / (s * s))
        },
        0.0,
        1.0,
        tol,
    )
}

// ---------------------------------------------------------------------------
// Double-exponential rules

/// Shared level-refinement driver. `node(t)` returns `weight * f(x(t))` or
/// `None` once the node lies beyond floating-point reach.
fn double_exponential<T: QuadValue>(
    node: impl Fn(f64) -> Option<T>,
    t_max: f64,
    tol: Tolerance,
) -> Integral<T> {
    const H0: f64 = 0.5;
    const MIN_SPAN: f64 = 3.0;
    let mut evaluations = 0usize;

    // sum over nodes t = offset + k * step for k = 0, 1, … walking outward
    let sweep = |offset: f64, step: f64, sign: f64, reference: f64, evals: &mut usize| -> T {
        let mut acc = T::zero();
        let mut quiet = 0;
        let mut t = offset;
        while t <= t_max {
            let term = node(sign * t);
            *evals += 1;
            match term {
                Some(v) if v.is_finite_value() => {
                    acc = acc + v;
                    let small = v.magnitude() <= 1e-18 * (reference + acc.magnitude());
                    if t > MIN_SPAN && small {
                        quiet += 1;
                        if quiet >= 4 {
                            break;
                        }
                    } else {
                        quiet = 0;
                    }
                }
                _ => {
                    if t > MIN_SPAN {
                        break;
                    }
                }
            }
            t += step;
        }
        acc
    };

    // level 0
    let mut sum = node(0.0)
        .filter(|v| v.is_finite_value())
        .unwrap_or(T::zero());
    evaluations += 1;
    let right = sweep(H0, H0, 1.0, sum.magnitude(), &mut evaluations);
    let left = sweep(H0, H0, -1.0, sum.magnitude(), &mut evaluations);
    sum = sum + right + left;
    let mut h = H0;
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for _ in 0..tol.max_levels.max(1) {
        h *= 0.5;
        let reference = sum.magnitude();
        let right = sweep(h, 2.0 * h, 1.0, reference, &mut evaluations);
        let left = sweep(h, 2.0 * h, -1.0, reference, &mut evaluations);
        sum = sum + right + left;
        let next = sum * h;
        error = (next - estimate).magnitude();
        estimate = next;
        if error <= tol.target(estimate.magnitude()) {
            converged = true;
            break;
        }
    }
    Integral {
        value: estimate,
        error,
        converged,
        evaluations,
    }
}

/// tanh-sinh on a finite interval. The integrand receives the abscissa and
/// its distance to the nearer endpoint, which stays accurate when the
/// abscissa itself would round onto the endpoint.
pub fn tanh_sinh<T: QuadValue>(
    f: impl Fn(f64, f64) -> T,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Integral<T> {
    let width = b - a;
    let node = |t: f64| -> Option<T> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance from the endpoint the node approaches
        let dist = width * e / (1.0 + e);
        if dist <= 0.0 {
            return None;
        }
        let x = if t >= 0.0 { b - dist } else { a + dist };
        let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
        let w = 0.5 * width * FRAC_PI_2 * t.cosh() * sech2;
        Some(f(x, dist) * w)
    };
    double_exponential(node, 4.5, tol)
}

/// exp-sinh on `[a, inf)`: `x = a + exp(pi/2 sinh t)`.
pub fn exp_sinh<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, tol: Tolerance) -> Integral<T> {
    let node = |t: f64| -> Option<T> {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        if e == 0.0 || !e.is_finite() {
            return None;
        }
        let x = a + e;
        if !x.is_finite() {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * e;
        let v = f(x);
        if !v.is_finite_value() {
            // overflowing evaluations only happen far out, where w*f -> 0
            return if t.abs() > 3.0 {
                Some(T::zero())
            } else {
                Some(v)
            };
        }
        Some(v * w)
    };
    double_exponential(node, 6.5, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TIGHT: Tolerance = Tolerance::new(1e-14, 1e-13, 30);

    #[test]
    fn gk_polynomial_and_oscillatory() {
        let r = gauss_kronrod(|x: f64| x * x, 0.0, 3.0, TIGHT);
        assert!(r.converged);
        assert_relative_eq!(r.value, 9.0, max_relative = 1e-14);
        let r = gauss_kronrod(|x: f64| (10.0 * x).sin(), 0.0, std::f64::consts::PI, TIGHT);
        assert!(r.value.abs() < 1e-13);
    }

    #[test]
    fn gk_endpoint_singularity_via_bisection() {
        let r = gauss_kronrod(
            |x: f64| x.powf(-0.5),
            0.0,
            1.0,
            Tolerance::new(1e-10, 1e-10, 30),
        );
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn tanh_sinh_peaked_at_endpoint() {
        // sqrt(c/pi) ∫_0^1 exp(-c x^2) dx -> 1/2 for large c
        let c = 1e6;
        let r = tanh_sinh(
            |x: f64, _| (c / std::f64::consts::PI).sqrt() * (-c * x * x).exp(),
            0.0,
            1.0,
            TIGHT,
        );
        assert!(r.converged);
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn semi_infinite_gk() {
        let r = gauss_kronrod_semi_infinite(|x: f64| (-x).exp(), 1.0, TIGHT);
        assert_relative_eq!(r.value, (-1f64).exp(), max_relative = 1e-13);
        // a cliff: exp(-e^{5(u-1)}) on [0, inf)
        let r = gauss_kronrod_semi_infinite(|u: f64| (-(5.0 * (u - 1.0)).exp()).exp(), 0.0, TIGHT);
        assert!(r.converged);
        assert!(r.evaluations < 5000);
    }

    #[test]
    fn exp_sinh_tails() {
        let r = exp_sinh(|x: f64| (-x).exp(), 0.0, TIGHT);
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-13);
        let r = exp_sinh(|x: f64| 1.0 / (1.0 + x * x), 0.0, TIGHT);
        assert_relative_eq!(r.value, FRAC_PI_2, max_relative = 1e-12);
        let r = exp_sinh(|x: f64| x.powf(-0.9) * (-x).exp(), 0.0, TIGHT);
        // Γ(0.1)
        assert_relative_eq!(r.value, 9.513_507_698_668_732, max_relative = 1e-12);
        let r = exp_sinh(
            |x: f64| Complex64::new(0.0, 1.0 * x).exp() * (-x).exp(),
            0.0,
            TIGHT,
        );
        // ∫ e^{(i-1)x} = 1/(1-i)
        let expect = Complex64::new(0.5, 0.5);
        assert!((r.value - expect).norm() < 1e-12);
    }
}
