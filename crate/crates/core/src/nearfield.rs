//! The transmitted field `Ψ(x, z)` as a superposition of running and crawling
//! modes, and local quantities derived from it.
//!
//! `Ψ = 2∫₀^1 F e^{i k_z z} cos(k_x x) dk_x + 2∫₁^∞ F e^{-χ_z z} cos(k_x x) dk_x`
//! at `t = 0`; the global factor `e^{-iω0 t}` is left out.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aperture::{ApertureProfile, TailForm};
use crate::error::{Error, Result};
use crate::quadrature::{fourier_tail, integrate, integrate_semi_infinite, QuadOptions, Trig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub z: f64,
    pub psi_rw: Complex64,
    pub psi_cw: Complex64,
    pub psi_total: Complex64,
}

/// Tolerances for the field integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
        }
    }
}

impl FieldOptions {
    pub fn with_tolerance(tol: f64) -> Self {
        FieldOptions {
            abs_tol: tol,
            rel_tol: tol,
        }
    }

    fn quad(&self, panels: usize) -> QuadOptions {
        QuadOptions::with_tolerance(self.abs_tol, self.rel_tol).panels(panels)
    }
}

/// What multiplies `F(k) e^{i k_z z}` under the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Kernel {
    /// `cos(k x)`, the field itself.
    Field,
    /// `-k sin(k x)`, its x-derivative.
    Gradient,
}

impl Kernel {
    fn eval(self, k: f64, x: f64) -> f64 {
        match self {
            Kernel::Field => (k * x).cos(),
            Kernel::Gradient => -k * (k * x).sin(),
        }
    }
}

fn oscillation_panels(phase_span: f64) -> usize {
    ((phase_span.abs() / 3.0).ceil() as usize).clamp(4, 4000)
}

fn check_point(x: f64, z: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain("field_at", format!("x must be finite, got {x}")));
    }
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::domain("field_at", format!("z must be finite and non-negative, got {z}")));
    }
    Ok(())
}

/// `2∫₀^min(1,k_end) F e^{i k_z z} kernel dk`, with `k = sin θ`.
fn running_part(profile: &ApertureProfile, x: f64, z: f64, kernel: Kernel, opts: &FieldOptions) -> Result<Complex64> {
    let theta_max = match profile.tail_form() {
        TailForm::Compact { end } if end < 1.0 => end.asin(),
        _ => FRAC_PI_2,
    };
    let panels = oscillation_panels(x.abs() + z);
    let r = integrate(
        |theta: f64| {
            let (k, kz) = theta.sin_cos();
            let weight = profile.amplitude(k) * kernel.eval(k, x) * kz;
            Complex64::from_polar(weight, kz * z)
        },
        0.0,
        theta_max,
        &opts.quad(panels),
    )?;
    Ok(2.0 * r.value)
}

/// `2∫_{k_lo}^{k_hi} F e^{-χ z} kernel dk` with `k = cosh s`.
fn crawling_head(
    profile: &ApertureProfile,
    x: f64,
    z: f64,
    k_hi: f64,
    kernel: Kernel,
    opts: &FieldOptions,
) -> Result<f64> {
    if k_hi <= 1.0 {
        return Ok(0.0);
    }
    let s_hi = k_hi.acosh();
    let panels = oscillation_panels(x.abs() * (k_hi - 1.0));
    let r = integrate(
        |s: f64| {
            let (k, chi) = (s.cosh(), s.sinh());
            profile.amplitude(k) * kernel.eval(k, x) * (-chi * z).exp() * chi
        },
        0.0,
        s_hi,
        &opts.quad(panels),
    )?;
    Ok(2.0 * r.value)
}

/// `2∫_K^∞ A(k) cos(bk) e^{-χ z} kernel dk`, split into pure Fourier components.
fn crawling_tail(
    profile: &ApertureProfile,
    x: f64,
    z: f64,
    start: f64,
    freq: f64,
    kernel: Kernel,
    opts: &FieldOptions,
) -> Result<f64> {
    let envelope = |k: f64| {
        let chi = ((k - 1.0) * (k + 1.0)).sqrt();
        let base = 0.5 * profile.tail_envelope(k) * (-chi * z).exp();
        match kernel {
            Kernel::Field => base,
            Kernel::Gradient => -k * base,
        }
    };
    let trig = match kernel {
        Kernel::Field => Trig::Cos,
        Kernel::Gradient => Trig::Sin,
    };
    let tail_opts = QuadOptions::with_tolerance(opts.abs_tol * 1e-1, opts.rel_tol);
    let mut total = 0.0;
    // cos(bk)cos(xk) = [cos((x+b)k) + cos((x-b)k)]/2, and likewise with sin(xk)
    for omega in [x + freq, x - freq] {
        let (w, sign) = (omega.abs(), omega.signum());
        let part = if w == 0.0 {
            match trig {
                Trig::Cos => integrate_semi_infinite(envelope, start, &tail_opts)?.value,
                Trig::Sin => 0.0,
            }
        } else {
            let v = fourier_tail(envelope, start, w, trig, &tail_opts)?.value;
            match trig {
                Trig::Cos => v,
                Trig::Sin => sign * v,
            }
        };
        total += part;
    }
    Ok(2.0 * total)
}

fn crawling_part(profile: &ApertureProfile, x: f64, z: f64, kernel: Kernel, opts: &FieldOptions) -> Result<f64> {
    match profile.tail_form() {
        TailForm::Compact { end } => crawling_head(profile, x, z, end, kernel, opts),
        TailForm::Modulated { start, freq } => {
            let head = crawling_head(profile, x, z, start, kernel, opts)?;
            let tail = crawling_tail(profile, x, z, start, freq, kernel, opts)?;
            Ok(head + tail)
        }
    }
}

pub fn field_at_with(x: f64, z: f64, profile: &ApertureProfile, opts: &FieldOptions) -> Result<FieldSample> {
    check_point(x, z)?;
    let psi_rw = running_part(profile, x, z, Kernel::Field, opts)?;
    let psi_cw = Complex64::new(crawling_part(profile, x, z, Kernel::Field, opts)?, 0.0);
    Ok(FieldSample {
        x,
        z,
        psi_rw,
        psi_cw,
        psi_total: psi_rw + psi_cw,
    })
}

/// `Ψ(x, z)` split into running and crawling parts.
pub fn field_at(x: f64, z: f64, profile: &ApertureProfile) -> Result<FieldSample> {
    field_at_with(x, z, profile, &FieldOptions::default())
}

/// `∂Ψ/∂x` by differentiating under the integral.
pub fn field_gradient_x(x: f64, z: f64, profile: &ApertureProfile, opts: &FieldOptions) -> Result<Complex64> {
    check_point(x, z)?;
    let rw = running_part(profile, x, z, Kernel::Gradient, opts)?;
    let cw = crawling_part(profile, x, z, Kernel::Gradient, opts)?;
    Ok(rw + cw)
}

/// `J_x = Im(Ψ* ∂Ψ/∂x)` at `t = 0`.
pub fn probability_current_x(x: f64, z: f64, profile: &ApertureProfile) -> Result<f64> {
    probability_current_x_with(x, z, profile, &FieldOptions::default())
}

pub fn probability_current_x_with(x: f64, z: f64, profile: &ApertureProfile, opts: &FieldOptions) -> Result<f64> {
    let psi = field_at_with(x, z, profile, opts)?.psi_total;
    let dpsi = field_gradient_x(x, z, profile, opts)?;
    Ok((psi.conj() * dpsi).im)
}

/// `|ψ_cw|²/|ψ_total|²` along a column of heights at fixed `x`.
pub fn cw_fraction_profile(x: f64, z_grid: &[f64], profile: &ApertureProfile) -> Result<Vec<(f64, f64)>> {
    cw_fraction_profile_with(x, z_grid, profile, &FieldOptions::default())
}

pub fn cw_fraction_profile_with(
    x: f64,
    z_grid: &[f64],
    profile: &ApertureProfile,
    opts: &FieldOptions,
) -> Result<Vec<(f64, f64)>> {
    if z_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("cw_fraction_profile", "z grid must be strictly increasing"));
    }
    z_grid
        .iter()
        .map(|&z| {
            let s = field_at_with(x, z, profile, opts)?;
            Ok((z, s.psi_cw.norm_sqr() / s.psi_total.norm_sqr()))
        })
        .collect()
}

/// `2∫₁^∞ |F| e^{-χ_z z} dk`, an upper bound on `|ψ_cw|`. Beyond the start of the
/// modulated tail `|F|` is replaced by its envelope, which keeps the bound and the
/// integrand smooth. Needs `z > 0` unless the profile is compact.
pub fn cw_envelope_bound(z: f64, profile: &ApertureProfile) -> Result<f64> {
    let opts = QuadOptions::with_tolerance(1e-14, 1e-10);
    let f = |s: f64| {
        let (k, chi) = (s.cosh(), s.sinh());
        profile.amplitude(k).abs() * (-chi * z).exp() * chi
    };
    let total = match profile.tail_form() {
        TailForm::Compact { end } if end <= 1.0 => return Ok(0.0),
        TailForm::Compact { end } => integrate(f, 0.0, end.acosh(), &opts.panels(8))?.value,
        TailForm::Modulated { start, .. } => {
            if z <= 0.0 {
                return Err(Error::domain("cw_envelope_bound", "needs z > 0 for an unbounded spectrum"));
            }
            let s0 = start.max(1.0).acosh();
            let head = integrate(f, 0.0, s0, &opts.panels(8))?.value;
            let envelope = |s: f64| {
                let (k, chi) = (s.cosh(), s.sinh());
                let decay = (-chi * z).exp();
                if decay == 0.0 {
                    return 0.0;
                }
                profile.tail_envelope(k).abs() * decay * chi
            };
            head + integrate_semi_infinite(envelope, s0, &opts)?.value
        }
    };
    Ok(2.0 * total)
}
