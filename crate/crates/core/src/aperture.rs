//! Aperture amplitude functions `F(k_x)` and the high-`k_x` tail probability.
//!
//! Profiles are even in `k_x` and exposed unnormalized; [`ApertureProfile::norm`]
//! gives `∫|F|² dk_x` over the whole line separately.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{fourier_tail, integrate, integrate_semi_infinite, QuadOptions, Trig};

/// Half-width of the window around `a·k_x = ±π` where the series is used.
const SLIT_SERIES_WINDOW: f64 = 1e-3;

/// Signed amplitude of the lowest TE slit mode, `sqrt(4πa) cos(a k/2) / (π² - a²k²)`.
pub fn slit_te_amplitude(kx: f64, a: f64) -> f64 {
    let u = (a * kx).abs();
    let e = u - PI;
    let ratio = if e.abs() < SLIT_SERIES_WINDOW {
        // cos(u/2) = -sin(e/2), π² - u² = -e(2π + e); sin(e/2)/e to O(e⁴)
        let e2 = e * e;
        0.5 * (1.0 - e2 / 24.0 + e2 * e2 / 1920.0) / (2.0 * PI + e)
    } else {
        (0.5 * u).cos() / ((PI - u) * (PI + u))
    };
    (4.0 * PI * a).sqrt() * ratio
}

/// `|F(k_x)|²` for a slit of width `a` (in units of `1/k0`).
pub fn slit_te_amplitude_sq(kx: f64, a: f64) -> f64 {
    let f = slit_te_amplitude(kx, a);
    f * f
}

/// Outcome of [`tail_probability`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailProbability {
    /// `2 ∫_{k'}^∞ |F|² dk_x` by quadrature.
    pub numeric: f64,
    pub abs_error: f64,
    /// The large-`a·k'` estimate `(8/3)π/(a k')³`.
    pub quoted_asymptote: f64,
    /// `numeric / quoted_asymptote`.
    pub ratio: f64,
}

/// `Σ (n+1) π^{2n} / ((2n+3) U^{2n+3})` = `∫_U^∞ du/(u² - π²)²`, for `U ≥ 2π`.
fn inverse_square_gap_tail(u: f64) -> f64 {
    let q = (PI / u).powi(2);
    let mut term = 1.0 / u.powi(3);
    let mut sum = 0.0;
    for n in 0..200 {
        let c = (n + 1) as f64 / (2 * n + 3) as f64;
        let add = c * term;
        sum += add;
        if add < 1e-18 * sum {
            break;
        }
        term *= q;
    }
    sum
}

/// `2 ∫_{u0}^∞ |F(u; a=1)|² du`, accepting `u0 = 0`.
fn slit_tail_scaled(u0: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    let split = 2.0 * PI;
    let mut value = 0.0;
    let mut error = 0.0;
    let start = u0.max(split);
    if u0 < split {
        let head = integrate(|u| slit_te_amplitude_sq(u, 1.0), u0, split, &opts.panels(8))?;
        value += head.value;
        error += head.abs_error;
    }
    // |F|² = 4π cos²(u/2)/(u²-π²)² = 2π (1 + cos u)/(u²-π²)²
    let smooth = 2.0 * PI * inverse_square_gap_tail(start);
    let osc = fourier_tail(
        |u| {
            let g = (u - PI) * (u + PI);
            1.0 / (g * g)
        },
        start,
        1.0,
        Trig::Cos,
        &QuadOptions {
            abs_tol: opts.abs_tol * 1e-3,
            ..*opts
        },
    )?;
    value += smooth + 2.0 * PI * osc.value;
    error += 2.0 * PI * osc.abs_error;
    Ok((2.0 * value, 2.0 * error))
}

/// Probability weight of all modes with `|k_x| > k'` for the single slit,
/// `2 ∫_{k'}^∞ |F(k_x)|² dk_x`. Depends on `a·k'` only.
pub fn tail_probability(k_prime: f64, a: f64) -> Result<TailProbability> {
    if !(k_prime > 0.0 && k_prime.is_finite()) {
        return Err(Error::domain("tail_probability", format!("k' must be positive, got {k_prime}")));
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("tail_probability", format!("slit width must be positive, got {a}")));
    }
    let u0 = a * k_prime;
    let (numeric, abs_error) = slit_tail_scaled(u0, &QuadOptions::with_tolerance(1e-15, 1e-12))?;
    let quoted = 8.0 / 3.0 * PI / u0.powi(3);
    Ok(TailProbability {
        numeric,
        abs_error,
        quoted_asymptote: quoted,
        ratio: numeric / quoted,
    })
}

/// Natural cubic spline through symmetric knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedProfile {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl TabulatedProfile {
    /// Samples `(k_x, F)`; mirrored to negative `k_x` so the result is even.
    /// Samples sharing the same `|k_x|` are averaged.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        let mut folded: Vec<(f64, f64)> = samples
            .iter()
            .map(|&(k, f)| {
                if !(k.is_finite() && f.is_finite()) {
                    return Err(Error::Profile(format!("non-finite sample ({k}, {f})")));
                }
                Ok((k.abs(), f))
            })
            .collect::<Result<_>>()?;
        folded.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut merged: Vec<(f64, f64, usize)> = Vec::new();
        for (k, f) in folded {
            match merged.last_mut() {
                Some(last) if (k - last.0).abs() <= 1e-12 * k.max(1.0) => {
                    last.1 += f;
                    last.2 += 1;
                }
                _ => merged.push((k, f, 1)),
            }
        }
        let half: Vec<(f64, f64)> = merged.into_iter().map(|(k, f, n)| (k, f / n as f64)).collect();
        let positive = half.iter().filter(|p| p.0 > 0.0).count();
        if positive < 1 || half.len() < 2 {
            return Err(Error::Profile("need at least two distinct |kx| samples".into()));
        }

        let mut knots = Vec::with_capacity(2 * half.len());
        let mut values = Vec::with_capacity(2 * half.len());
        for &(k, f) in half.iter().rev().filter(|p| p.0 > 0.0) {
            knots.push(-k);
            values.push(f);
        }
        for &(k, f) in &half {
            knots.push(k);
            values.push(f);
        }
        let second = natural_spline_second_derivatives(&knots, &values);
        Ok(TabulatedProfile { knots, values, second })
    }

    /// CSV with columns `kx/k0, F`; a non-numeric first line is taken as header,
    /// blank lines and `#` comments are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = (cols.len() >= 2)
                .then(|| Some((cols[0].parse::<f64>().ok()?, cols[1].parse::<f64>().ok()?)))
                .flatten();
            match parsed {
                Some(p) => samples.push(p),
                None if samples.is_empty() && lineno == 0 => continue,
                None => {
                    return Err(Error::Profile(format!(
                        "line {}: expected `kx,F`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        Self::new(&samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Profile(format!("{}: {e}", path.display())))?;
        Self::from_csv_str(&text)
    }

    /// Largest tabulated `|k_x|`; the profile vanishes beyond it.
    pub fn k_max(&self) -> f64 {
        *self.knots.last().expect("non-empty")
    }

    pub fn eval(&self, kx: f64) -> f64 {
        let k = kx.abs();
        if k > self.k_max() {
            return 0.0;
        }
        let i = match self.knots.partition_point(|&t| t <= k) {
            0 => 0,
            n if n >= self.knots.len() => self.knots.len() - 2,
            n => n - 1,
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let a = (x1 - k) / h;
        let b = (k - x0) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h / 6.0
    }
}

fn natural_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let c = h1 / 6.0;
        let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ProfileShape {
    /// Lowest TE mode of a slit of width `a` (units of `1/k0`).
    SingleSlitTe { a: f64 },
    /// `exp(-k_x² w² / 4)`.
    Gaussian { w: f64 },
    Tabulated(TabulatedProfile),
}

/// How `F` behaves beyond the last finite panel used by the field integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailForm {
    /// `F(k) = A(k) cos(freq·k)` for `k ≥ start`, with smooth monotone `A`.
    Modulated { start: f64, freq: f64 },
    /// `F(k) = 0` for `k > end`.
    Compact { end: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApertureProfile {
    pub shape: ProfileShape,
    /// Overall amplitude multiplier.
    pub scale: f64,
}

impl ApertureProfile {
    pub fn single_slit(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Profile(format!("slit width must be positive, got {a}")));
        }
        Ok(ApertureProfile {
            shape: ProfileShape::SingleSlitTe { a },
            scale: 1.0,
        })
    }

    pub fn gaussian(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Profile(format!("gaussian width must be positive, got {w}")));
        }
        Ok(ApertureProfile {
            shape: ProfileShape::Gaussian { w },
            scale: 1.0,
        })
    }

    pub fn tabulated(table: TabulatedProfile) -> Self {
        ApertureProfile {
            shape: ProfileShape::Tabulated(table),
            scale: 1.0,
        }
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    /// `F(k_x)`.
    pub fn amplitude(&self, kx: f64) -> f64 {
        self.scale
            * match &self.shape {
                ProfileShape::SingleSlitTe { a } => slit_te_amplitude(kx, *a),
                ProfileShape::Gaussian { w } => (-kx * kx * w * w / 4.0).exp(),
                ProfileShape::Tabulated(t) => t.eval(kx),
            }
    }

    pub fn amplitude_sq(&self, kx: f64) -> f64 {
        let f = self.amplitude(kx);
        f * f
    }

    pub fn tail_form(&self) -> TailForm {
        match &self.shape {
            ProfileShape::SingleSlitTe { a } => TailForm::Modulated {
                start: (4.0 * PI / a).max(2.0),
                freq: 0.5 * a,
            },
            ProfileShape::Gaussian { .. } => TailForm::Modulated { start: 2.0, freq: 0.0 },
            ProfileShape::Tabulated(t) => TailForm::Compact { end: t.k_max() },
        }
    }

    /// `A(k)` of [`TailForm::Modulated`]; zero for compact profiles.
    pub fn tail_envelope(&self, kx: f64) -> f64 {
        self.scale
            * match &self.shape {
                ProfileShape::SingleSlitTe { a } => {
                    let u = a * kx;
                    (4.0 * PI * a).sqrt() / ((PI - u) * (PI + u))
                }
                ProfileShape::Gaussian { w } => (-kx * kx * w * w / 4.0).exp(),
                ProfileShape::Tabulated(_) => 0.0,
            }
    }

    /// `∫_{-∞}^{∞} |F(k_x)|² dk_x`.
    pub fn norm(&self) -> Result<f64> {
        let s2 = self.scale * self.scale;
        let opts = QuadOptions::with_tolerance(1e-15, 1e-13);
        match &self.shape {
            ProfileShape::SingleSlitTe { .. } => Ok(s2 * slit_tail_scaled(0.0, &opts)?.0),
            ProfileShape::Gaussian { w } => {
                let r = integrate_semi_infinite(|k| (-k * k * w * w / 2.0).exp(), 0.0, &opts)?;
                Ok(2.0 * s2 * r.value)
            }
            ProfileShape::Tabulated(t) => {
                let n = t.knots.len();
                let r = integrate(|k| t.eval(k).powi(2), 0.0, t.k_max(), &opts.panels(n))?;
                Ok(2.0 * s2 * r.value)
            }
        }
    }
}
