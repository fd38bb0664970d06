//! Adaptive Gauss-Kronrod quadrature.
//!
//! Three entry points:
//! - [`integrate`] over a finite interval (21-point Kronrod rule with the
//!   embedded 10-point Gauss rule, global bisection of the worst panel),
//! - [`integrate_semi_infinite`] over `[a, ∞)` through `x = a + (1 - t)/t`,
//! - [`fourier_tail`] for `∫_a^∞ g(x) cos(ωx) dx` (or `sin`) with slowly
//!   decaying `g`: integrate half-periods between consecutive zeros of the
//!   trigonometric factor and extrapolate the partial sums with Wynn's
//!   epsilon algorithm.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Values the integrator can accumulate: `f64` and `Complex64`.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + PartialEq
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of panels kept by the adaptive loop.
    pub max_subdivisions: usize,
    /// The interval is first cut into this many equal panels.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 20_000,
            initial_panels: 1,
        }
    }
}

impl QuadOptions {
    pub fn with_tolerance(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    /// roundoff floor of `error`; a panel at its floor cannot improve by bisection
    floor: f64,
}

struct Worst<T>(Panel<T>);

impl<T> PartialEq for Worst<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<T> Eq for Worst<T> {}
impl<T> PartialOrd for Worst<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Worst<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.error.total_cmp(&other.0.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> (f64, f64) {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        50.0 * f64::EPSILON * res_abs
    } else {
        0.0
    };
    (scaled.max(floor), floor)
}

fn gk21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    let fc = f(center);
    let mut gauss = T::zero();
    let mut kronrod = fc * WGK[10];
    let mut res_abs = fc.magnitude() * WGK[10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        gauss = gauss + (f1 + f2) * WG[j];
        kronrod = kronrod + (f1 + f2) * WGK[jtw];
        res_abs += WGK[jtw] * (f1.magnitude() + f2.magnitude());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[jtwm1];
        res_abs += WGK[jtwm1] * (f1.magnitude() + f2.magnitude());
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }

    let abs_half = half.abs();
    let err = (kronrod - gauss).magnitude() * abs_half;
    let (error, floor) = rescale_error(err, res_abs * abs_half, res_asc * abs_half);
    Panel {
        a,
        b,
        value: kronrod * half,
        error,
        floor,
    }
}

const EVALS_PER_PANEL: usize = 21;

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Ok(QuadResult {
            value: T::zero(),
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", format!("finite limits required, got [{a}, {b}]")));
    }

    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut heap: BinaryHeap<Worst<T>> = (0..n0)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
            Worst(gk21(&f, lo, hi))
        })
        .collect();
    let mut evaluations = n0 * EVALS_PER_PANEL;
    let mut total = heap.iter().fold(T::zero(), |acc, p| acc + p.0.value);
    let mut error: f64 = heap.iter().map(|p| p.0.error).sum();
    let mut floor: f64 = heap.iter().map(|p| p.0.floor).sum();

    loop {
        let target = opts.target(total.magnitude());
        // converged, or every remaining error is roundoff that bisection cannot remove
        if error <= target || error <= floor * (1.0 + 1e-9) {
            break;
        }
        let Worst(p) = heap.pop().expect("at least one panel");
        let mid = 0.5 * (p.a + p.b);
        if heap.len() + 2 > opts.max_subdivisions || mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            return Err(Error::Quadrature {
                achieved: error,
                requested: target,
                evaluations,
            });
        }
        let left = gk21(&f, p.a, mid);
        let right = gk21(&f, mid, p.b);
        evaluations += 2 * EVALS_PER_PANEL;
        total = total - p.value + left.value + right.value;
        error += left.error + right.error - p.error;
        floor += left.floor + right.floor - p.floor;
        heap.push(Worst(left));
        heap.push(Worst(right));
    }

    // re-sum to drop the drift of the running totals
    let value = heap.iter().fold(T::zero(), |acc, p| acc + p.0.value);
    let abs_error = heap.iter().map(|p| p.0.error).sum();
    Ok(QuadResult {
        value,
        abs_error,
        evaluations,
    })
}

/// `∫_a^∞ f(x) dx` through the map `x = a + (1 - t)/t`, `t ∈ (0, 1]`.
pub fn integrate_semi_infinite<T, F>(f: F, a: f64, opts: &QuadOptions) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate(
        |t: f64| {
            let x = a + (1.0 - t) / t;
            f(x) * (1.0 / (t * t))
        },
        0.0,
        1.0,
        opts,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

impl Trig {
    fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Cos => x.cos(),
            Trig::Sin => x.sin(),
        }
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// extrapolated limit from the deepest even column available.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n < 3 {
        return *sums.last().unwrap_or(&0.0);
    }
    // prev = column k-1, cur = column k
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut best = sums[n - 1];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            let base = prev[i + 1];
            if diff == 0.0 {
                // stationary at this depth
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(base + 1.0 / diff);
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

/// `∫_a^∞ g(x)·trig(ωx) dx` for `ω > 0` and a non-oscillatory, decaying `g`.
pub fn fourier_tail<F>(g: F, a: f64, omega: f64, trig: Trig, opts: &QuadOptions) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain("fourier_tail", format!("omega must be positive, got {omega}")));
    }
    let half_period = std::f64::consts::PI / omega;
    // zeros of cos(ωx) sit at (j + 1/2)π/ω, of sin(ωx) at jπ/ω
    let phase = match trig {
        Trig::Cos => 0.5,
        Trig::Sin => 0.0,
    };
    let mut j = ((a * omega / std::f64::consts::PI) - phase).floor() + 1.0;
    let mut lo = a;
    let integrand = |x: f64| g(x) * trig.eval(omega * x);
    let cycle_opts = QuadOptions {
        abs_tol: opts.abs_tol * 1e-2,
        ..*opts
    };

    let mut sums: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let mut quad_error = 0.0;
    let mut evaluations = 0;
    let mut history: Vec<f64> = Vec::new();
    // cancellation between half-periods limits what extrapolation can resolve
    let mut largest_piece: f64 = 0.0;
    const MAX_CYCLES: usize = 4000;
    const WINDOW: usize = 24;

    for cycle in 0..MAX_CYCLES {
        let hi = (j + phase) * half_period;
        let piece = integrate(integrand, lo, hi, &cycle_opts)?;
        evaluations += piece.evaluations;
        quad_error += piece.abs_error;
        sum += piece.value;
        largest_piece = largest_piece.max(piece.value.abs());
        sums.push(sum);
        lo = hi;
        j += 1.0;

        let window = &sums[sums.len().saturating_sub(WINDOW)..];
        let estimate = wynn_epsilon(window);
        history.push(estimate);

        // plain convergence: the terms themselves have become negligible
        let small_term = piece.value.abs() <= 1e-3 * opts.target(sum);
        if cycle >= 2 && small_term && sums.len() >= 2 {
            let prev_small = (sums[sums.len() - 1] - sums[sums.len() - 2]).abs() <= opts.target(sum);
            if prev_small {
                return Ok(QuadResult {
                    value: sum,
                    abs_error: quad_error + piece.value.abs(),
                    evaluations,
                });
            }
        }

        if history.len() >= 4 {
            let h = &history[history.len() - 4..];
            let spread = (h[3] - h[2]).abs().max((h[2] - h[1]).abs()).max((h[1] - h[0]).abs());
            if spread <= opts.target(estimate).max(64.0 * f64::EPSILON * largest_piece) {
                return Ok(QuadResult {
                    value: estimate,
                    abs_error: spread + quad_error,
                    evaluations,
                });
            }
        }
    }

    let n = history.len();
    let achieved = if n >= 2 {
        (history[n - 1] - history[n - 2]).abs()
    } else {
        f64::INFINITY
    };
    Err(Error::Quadrature {
        achieved,
        requested: opts.target(sum),
        evaluations,
    })
}
