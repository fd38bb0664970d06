//! Fixed-point decimal arithmetic on big integers, used as an independent
//! high-precision reference in tests.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Digits after the decimal point.
pub const DIGITS: u32 = 100;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

/// A real number stored as `value · 10^DIGITS`, truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fx(pub BigInt);

impl Fx {
    pub fn int(v: i64) -> Fx {
        Fx(BigInt::from(v) * scale())
    }

    /// Exact conversion of a double (up to the last stored digit).
    pub fn from_f64(v: f64) -> Fx {
        assert!(v.is_finite());
        if v == 0.0 {
            return Fx(BigInt::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        let mut n = BigInt::from(mant) * scale();
        if e >= 0 {
            n <<= e as usize;
        } else {
            n >>= (-e) as usize;
        }
        Fx(n * sign)
    }

    /// Parse a decimal literal such as `"-12.5e-3"`.
    pub fn parse(s: &str) -> Fx {
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().unwrap()),
            None => (s, 0),
        };
        let neg = mant.starts_with('-');
        let mant = mant.trim_start_matches(['-', '+']);
        let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
        let digits: BigInt = format!("{ip}{fp}").parse().unwrap();
        let shift = DIGITS as i32 + exp - fp.len() as i32;
        let ten = BigInt::from(10u32);
        let mut n = if shift >= 0 { digits * ten.pow(shift as u32) } else { digits / ten.pow((-shift) as u32) };
        if neg {
            n = -n;
        }
        Fx(n)
    }

    pub fn to_f64(&self) -> f64 {
        let s = scale();
        let neg = self.0.is_negative();
        let a = self.0.abs();
        let ip = &a / &s;
        let fp = &a % &s;
        let text = format!("{}{}.{:0>width$}", if neg { "-" } else { "" }, ip, fp, width = DIGITS as usize);
        text.parse().unwrap()
    }

    pub fn abs(&self) -> Fx {
        Fx(self.0.abs())
    }

    pub fn sqrt(&self) -> Fx {
        assert!(!self.0.is_negative(), "sqrt of negative");
        Fx((&self.0 * scale()).sqrt())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// True when `|self| < 10^-digits`.
    pub fn below(&self, digits: u32) -> bool {
        self.0.abs() < BigInt::from(10u32).pow(DIGITS - digits)
    }
}

impl PartialOrd for Fx {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.0.cmp(&other.0))
    }
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }
}

impl Mul for &Fx {
    type Output = Fx;
    fn mul(self, o: &Fx) -> Fx {
        Fx(&self.0 * &o.0 / scale())
    }
}

impl Div for &Fx {
    type Output = Fx;
    fn div(self, o: &Fx) -> Fx {
        Fx(&self.0 * scale() / &o.0)
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx(-&self.0)
    }
}

/// Complex number over [`Fx`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cx {
    pub re: Fx,
    pub im: Fx,
}

impl Cx {
    pub fn new(re: Fx, im: Fx) -> Cx {
        Cx { re, im }
    }

    pub fn real(re: Fx) -> Cx {
        Cx { re, im: Fx(BigInt::zero()) }
    }

    pub fn add(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Cx) -> Cx {
        Cx::new(&(&self.re * &o.re) - &(&self.im * &o.im), &(&self.re * &o.im) + &(&self.im * &o.re))
    }

    pub fn scale(&self, f: &Fx) -> Cx {
        Cx::new(&self.re * f, &self.im * f)
    }

    pub fn norm(&self) -> Fx {
        (&(&self.re * &self.re) + &(&self.im * &self.im)).sqrt()
    }

    /// Principal branch: `Re ≥ 0`, sign of `Im` follows the argument.
    pub fn sqrt(&self) -> Cx {
        let r = self.norm();
        let two = Fx::int(2);
        // truncation can leave r a unit below |re|
        let half = |v: Fx| if v.is_negative() { Fx(BigInt::zero()) } else { (&v / &two).sqrt() };
        let re = half(&r + &self.re);
        let im = half(&r - &self.re);
        let im = if self.im.is_negative() { -&im } else { im };
        Cx::new(re, im)
    }
}

pub fn one() -> Fx {
    Fx(scale())
}

/// `1 - (1 + mu)^(-1/2)` in fixed point.
pub fn one_minus_inv_sqrt1p(mu: &Fx) -> Fx {
    let one = one();
    &one - &(&one / &(&one + mu).sqrt())
}

/// Complex `k̃` of the free-screen root, in fixed point.
pub fn output_wavenumber(kx: &Fx, k_m: &Fx) -> Cx {
    let one = one();
    let two = Fx::int(2);
    let radicand = &one - &(&(&one + &(&two / k_m)) * &(kx * kx));
    let root = if radicand.is_negative() {
        Cx::new(Fx(BigInt::zero()), (-&radicand).sqrt())
    } else {
        Cx::real(radicand.sqrt())
    };
    let den = k_m + &two;
    Cx::real(k_m + &one).add(&root).scale(&(&one / &den))
}

/// `√(K_M² + s) - K_M - (1 - k̃)` with `s = 1 - 2√(k̃² - k_x²) + k̃²`.
pub fn energy_balance_residual(kx: &Fx, k_m: &Fx, k_tilde: &Cx) -> Cx {
    let one = Cx::real(one());
    let k2 = k_tilde.mul(k_tilde);
    let kz = k2.sub(&Cx::real(kx * kx)).sqrt();
    let s = one.sub(&kz.scale(&Fx::int(2))).add(&k2);
    let lhs = Cx::real(k_m * k_m).add(&s).sqrt().sub(&Cx::real(k_m.clone()));
    lhs.sub(&one.sub(k_tilde))
}

#[test]
fn fixed_point_self_check() {
    let two = Fx::int(2);
    let r = two.sqrt();
    assert!((&(&r * &r) - &two).below(95));
    assert_eq!(Fx::from_f64(0.375).to_f64(), 0.375);
    assert_eq!(Fx::parse("-1.25e-2").to_f64(), -0.0125);
    let z = Cx::new(Fx::int(-3), Fx::int(4)).sqrt();
    assert_eq!((z.re.to_f64(), z.im.to_f64()), (1.0, 2.0));
}

/// `2∫₀^K f(k) cos(kx) dk` by the trapezoid rule on a uniform grid of step `h`.
pub fn cosine_transform_trapezoid(f: impl Fn(f64) -> f64, x: f64, k_max: f64, h: f64) -> f64 {
    let n = (k_max / h).round() as usize;
    let h = k_max / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(k_max) * (k_max * x).cos());
    for i in 1..n {
        let k = i as f64 * h;
        sum += f(k) * (k * x).cos();
    }
    2.0 * h * sum
}

/// `2∫_K^∞ F(k) cos(kx) dk` for the slit amplitude `F = c cos(ak/2)/(π² - a²k²)`,
/// by three rounds of integration by parts on each beat frequency.
pub fn slit_tail_by_parts(x: f64, a: f64, k: f64) -> f64 {
    use std::f64::consts::PI;
    let c = (4.0 * PI * a).sqrt();
    let q = PI * PI - a * a * k * k;
    let g0 = c / q;
    let g1 = 2.0 * c * a * a * k / (q * q);
    let g2 = 2.0 * c * a * a * (PI * PI + 3.0 * a * a * k * k) / (q * q * q);
    let mut total = 0.0;
    for w in [x + 0.5 * a, x - 0.5 * a] {
        let (s, co) = (w * k).sin_cos();
        total += -g0 * s / w - g1 * co / (w * w) + g2 * s / (w * w * w);
    }
    total
}
