//! Scaled complementary error function `erfcx(x) = exp(x²)·erfc(x)`.

use std::f64::consts::PI;

use libm::erfc;

/// Above this the continued fraction converges in a handful of terms and
/// `exp(x²)` would start to overflow.
const CF_THRESHOLD: f64 = 26.0;

/// `exp(x²)` with the rounding error of `x²` folded back in.
fn exp_x2(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * (1.0 + lo)
}

/// Lentz evaluation of `erfcx(x) = 1/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// Scaled complementary error function. Overflows to `+∞` for `x ≲ -26.6`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 * exp_x2(x) - erfcx(-x);
    }
    if x >= CF_THRESHOLD {
        erfcx_continued_fraction(x)
    } else {
        exp_x2(x) * erfc(x)
    }
}
