//! Photon and free screen exchanging energy and momentum: complex output
//! wavenumbers, complex energies and the resulting Gamow lifetimes.
//!
//! Units: wavenumbers in `k0`, energies in `ε0 = ħ c k0`, times in `1/ω0`.
//! The screen enters only through `K_M = Mc/(ħ k0)`, which is around `1e34`
//! for a macroscopic screen; every expression below avoids subtracting
//! nearly equal quantities so the `1/K_M` corrections survive.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aperture::{tail_probability, TailProbability};
use crate::error::{Error, Result};
use crate::mode_spectrum::ModeKind;
use crate::quantities::{sqrt_shift_minus, stable_one_minus_inv_sqrt1p, ScaledUnits};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenSpec {
    /// `K_M = Mc/(ħ k0)`.
    pub k_m: f64,
    pub mass_kg: Option<f64>,
}

impl ScreenSpec {
    pub fn new(k_m: f64) -> Result<Self> {
        if !(k_m > 0.0 && k_m.is_finite()) {
            return Err(Error::domain("ScreenSpec::new", format!("K_M must be positive and finite, got {k_m}")));
        }
        Ok(ScreenSpec { k_m, mass_kg: None })
    }

    pub fn from_mass(mass_kg: f64, units: &ScaledUnits) -> Result<Self> {
        if !(mass_kg > 0.0 && mass_kg.is_finite()) {
            return Err(Error::domain("ScreenSpec::from_mass", format!("mass must be positive, got {mass_kg}")));
        }
        let mut s = Self::new(units.compton_ratio(mass_kg))?;
        s.mass_kg = Some(mass_kg);
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub eta: f64,
    pub k_c: f64,
    /// `1 - η`, accurate for any `K_M`.
    pub one_minus_eta: f64,
}

/// `η = √(K_M/(K_M + 2))`, the evanescence threshold of a free screen.
pub fn critical_threshold(screen: &ScreenSpec) -> Threshold {
    let one_minus_eta = stable_one_minus_inv_sqrt1p(2.0 / screen.k_m).expect("K_M > 0");
    let eta = 1.0 - one_minus_eta;
    Threshold {
        eta,
        k_c: eta,
        one_minus_eta,
    }
}

/// `|k_x| - η`, computed as `(|k_x| - 1) + (1 - η)`.
fn excess_over_threshold(kx: f64, th: &Threshold) -> f64 {
    (kx.abs() - 1.0) + th.one_minus_eta
}

/// `k̃` from the "+" root, with the radicand `1 - (1 + 2/K_M) k_x²` taken as
/// written and continued to `+i√(-…)` when negative.
pub fn output_wavenumber(kx: f64, screen: &ScreenSpec) -> Complex64 {
    let k = screen.k_m;
    let radicand = (1.0 - kx) * (1.0 + kx) - 2.0 * kx * kx / k;
    let root = if radicand >= 0.0 {
        Complex64::new(radicand.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-radicand).sqrt())
    };
    (Complex64::new(k + 1.0, 0.0) + root) / (k + 2.0)
}

/// Joint photon and screen state for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoilSolution {
    pub kx: f64,
    pub kind: ModeKind,
    pub k_tilde: Complex64,
    pub kz_tilde: Complex64,
    /// Screen momentum along x, `-k_x`.
    #[serde(rename = "Kx")]
    pub screen_kx: f64,
    #[serde(rename = "Kz_tilde")]
    pub screen_kz_tilde: Complex64,
    pub chi_z: f64,
    pub eps_real: f64,
    pub gamma: f64,
    #[serde(rename = "E_real")]
    pub screen_energy: f64,
    #[serde(rename = "Gamma")]
    pub screen_width: f64,
    pub eta: f64,
    pub k_c: f64,
    pub k_m: f64,
}

impl RecoilSolution {
    /// `ε̃ = ε + iγ`.
    pub fn photon_energy(&self) -> Complex64 {
        Complex64::new(self.eps_real, self.gamma)
    }

    /// `Ẽ = E - iΓ`.
    pub fn screen_energy_complex(&self) -> Complex64 {
        Complex64::new(self.screen_energy, -self.screen_width)
    }

    /// `ε̃ + Ẽ`, which must be the input photon energy 1.
    pub fn combined_frequency(&self) -> Complex64 {
        self.photon_energy() + self.screen_energy_complex()
    }
}

/// Full solution for one `k_x`. Crawling modes use the decomposition
/// `k̃_z = 1/(K_M + 2) + iχ_z`, running modes the real root.
pub fn recoil_solution(kx: f64, screen: &ScreenSpec) -> Result<RecoilSolution> {
    if !kx.is_finite() {
        return Err(Error::domain("recoil_solution", format!("kx must be finite, got {kx}")));
    }
    let k = screen.k_m;
    let th = critical_threshold(screen);
    let eta = th.eta;
    let d = excess_over_threshold(kx, &th);
    let denom = k + 2.0;
    let re_kz_cw = 1.0 / denom;
    let re_screen_cw = (k + 1.0) / denom;

    let sol = if d > 0.0 {
        // χ_z = η(1 + 1/K_M)√(k_x² - η²)
        let chi = eta * (1.0 + 1.0 / k) * (d * (kx.abs() + eta)).sqrt();
        let width = chi / (k + 1.0);
        RecoilSolution {
            kx,
            kind: ModeKind::CrawlingWave,
            k_tilde: Complex64::new(re_screen_cw, width),
            kz_tilde: Complex64::new(re_kz_cw, chi),
            screen_kx: -kx,
            screen_kz_tilde: Complex64::new(re_screen_cw, -chi),
            chi_z: chi,
            eps_real: re_screen_cw,
            gamma: width,
            screen_energy: re_kz_cw,
            screen_width: width,
            eta,
            k_c: th.k_c,
            k_m: k,
        }
    } else {
        // √R with R = (η² - k_x²)/η², and 1 - √R = (1 - R)/(1 + √R)
        let r = (-d * (kx.abs() + eta)).max(0.0) / (eta * eta);
        let sr = r.sqrt();
        let one_minus_sr = kx * kx * (1.0 + 2.0 / k) / (1.0 + sr);
        let screen_energy = one_minus_sr / denom;
        let kz = (1.0 + (k + 1.0) * sr) / denom;
        let k_tilde = (k + 1.0 + sr) / denom;
        RecoilSolution {
            kx,
            kind: ModeKind::RunningWave,
            k_tilde: Complex64::new(k_tilde, 0.0),
            kz_tilde: Complex64::new(kz, 0.0),
            screen_kx: -kx,
            screen_kz_tilde: Complex64::new((k + 1.0) * one_minus_sr / denom, 0.0),
            chi_z: 0.0,
            eps_real: k_tilde,
            gamma: 0.0,
            screen_energy,
            screen_width: 0.0,
            eta,
            k_c: th.k_c,
            k_m: k,
        }
    };
    Ok(sol)
}

/// Both sides of the energy balance `√(K_M² + s) - K_M = 1 - k̃` with
/// `s = 1 - 2√(k̃² - k_x²) + k̃²`, for a given `k̃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBalance {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

pub fn energy_balance(kx: f64, k_tilde: Complex64, screen: &ScreenSpec) -> EnergyBalance {
    let kz = (k_tilde * k_tilde - kx * kx).sqrt();
    let s = Complex64::new(1.0, 0.0) - 2.0 * kz + k_tilde * k_tilde;
    let lhs = sqrt_shift_minus(screen.k_m, s);
    let rhs = Complex64::new(1.0, 0.0) - k_tilde;
    EnergyBalance {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    }
}

/// Screen momentum "magnitude" `K̃` two ways: from its components, and from
/// `k̃` alone.
pub fn screen_momentum_magnitude(sol: &RecoilSolution) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let dz = one - sol.kz_tilde;
    let from_components = (dz * dz + sol.kx * sol.kx).sqrt();
    let k2 = sol.k_tilde * sol.k_tilde;
    let from_k = (one - 2.0 * (k2 - sol.kx * sol.kx).sqrt() + k2).sqrt();
    (from_components, from_k)
}

/// `Γ` at large `|k_x|`, next to the exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaAsymptotic {
    /// `χ_z/(K_M + 1)`.
    pub exact: f64,
    /// `χ_z/K_M`.
    pub asymptotic: f64,
    /// `|k_x|/K_M`.
    pub deep: f64,
    /// `|asymptotic - exact|/exact`.
    pub relative_difference: f64,
}

fn require_crawling(kx: f64, screen: &ScreenSpec) -> Result<RecoilSolution> {
    let sol = recoil_solution(kx, screen)?;
    if sol.kind != ModeKind::CrawlingWave {
        return Err(Error::NotEvanescent { kx, threshold: sol.k_c });
    }
    Ok(sol)
}

pub fn gamma_asymptotic(kx: f64, screen: &ScreenSpec) -> Result<GammaAsymptotic> {
    let sol = require_crawling(kx, screen)?;
    let asymptotic = sol.chi_z / screen.k_m;
    Ok(GammaAsymptotic {
        exact: sol.screen_width,
        asymptotic,
        deep: kx.abs() / screen.k_m,
        relative_difference: ((asymptotic - sol.screen_width) / sol.screen_width).abs(),
    })
}

/// `τ = ħ/Γ` by three routes, in seconds and in units of `1/ω0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GamowLifetime {
    /// `(K_M + 1)/χ_z`.
    pub exact: f64,
    /// `K_M/χ_z`.
    pub asymptotic: f64,
    /// `K_M/|k_x|`, i.e. `M/(ħ k0 |k_x|)`.
    pub deep: f64,
    pub exact_s: f64,
    pub asymptotic_s: f64,
    pub deep_s: f64,
}

pub fn gamow_lifetime(kx: f64, screen: &ScreenSpec, units: &ScaledUnits) -> Result<GamowLifetime> {
    let g = gamma_asymptotic(kx, screen)?;
    let exact = 1.0 / g.exact;
    let asymptotic = 1.0 / g.asymptotic;
    let deep = 1.0 / g.deep;
    let s = 1.0 / units.omega0();
    Ok(GamowLifetime {
        exact,
        asymptotic,
        deep,
        exact_s: exact * s,
        asymptotic_s: asymptotic * s,
        deep_s: deep * s,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraverseTime {
    /// `K_M/(χ_z Re K̃_z)` in units of `1/ω0`.
    pub value: f64,
    pub seconds: f64,
    /// Divided by the exact lifetime.
    pub ratio_to_lifetime: f64,
    /// Divided by `M/(ħ k0 |k_x|)`.
    pub ratio_to_deep_lifetime: f64,
    pub warnings: Vec<String>,
}

/// Time for the screen's evanescent tail, of depth `1/χ_z`, to move past at
/// `v_z = ħ k0 Re K̃_z/M`.
pub fn traverse_time(kx: f64, screen: &ScreenSpec, units: &ScaledUnits) -> Result<TraverseTime> {
    let sol = require_crawling(kx, screen)?;
    let life = gamow_lifetime(kx, screen, units)?;
    let value = screen.k_m / (sol.chi_z * sol.screen_kz_tilde.re);
    let mut warnings = Vec::new();
    if screen.k_m < 1e3 {
        warnings.push(format!("K_M = {} is below 1e3; the traverse estimate assumes a heavy screen", screen.k_m));
    }
    if kx.abs() < 10.0 * sol.k_c {
        warnings.push(format!("|kx| = {} is below 10 k_c; the traverse estimate assumes a deep crawling mode", kx.abs()));
    }
    Ok(TraverseTime {
        value,
        seconds: value / units.omega0(),
        ratio_to_lifetime: value / life.exact,
        ratio_to_deep_lifetime: value / life.deep,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortLifetime {
    /// `k'_x/k0` at which the deep-mode lifetime equals `τ_max`.
    pub k_prime: f64,
    pub probability: f64,
    /// Present when `k' > k_c`.
    pub tail: Option<TailProbability>,
    /// `k' ≤ k_c`: every crawling mode already lives shorter than `τ_max`.
    pub out_of_regime: bool,
}

/// Probability that a slit of width `a` (units of `1/k0`) puts the screen in
/// a mode with lifetime below `tau_max` seconds.
pub fn short_lifetime_probability(
    tau_max: f64,
    a: f64,
    screen: &ScreenSpec,
    units: &ScaledUnits,
) -> Result<ShortLifetime> {
    if !(tau_max > 0.0) {
        return Err(Error::domain("short_lifetime_probability", format!("tau_max must be positive, got {tau_max}")));
    }
    let k_prime = screen.k_m / (units.omega0() * tau_max);
    let th = critical_threshold(screen);
    if !(k_prime > th.k_c) {
        return Ok(ShortLifetime {
            k_prime,
            probability: 1.0,
            tail: None,
            out_of_regime: true,
        });
    }
    let tail = tail_probability(k_prime, a)?;
    Ok(ShortLifetime {
        k_prime,
        probability: tail.numeric,
        tail: Some(tail),
        out_of_regime: false,
    })
}

/// Position in the x–z plane, units of `1/k0`.
pub type Position = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntangledTerm {
    pub photon: Complex64,
    pub screen: Complex64,
    pub product: Complex64,
    /// `exp(-i(ε̃ + Ẽ)t)`.
    pub time_factor: Complex64,
}

/// One term `ψ S = exp(i(k̃·r - ε̃t)) exp(i(K̃·R - Ẽt))` of the entangled
/// superposition; `t` in units of `1/ω0`.
pub fn entangled_term(kx: f64, screen: &ScreenSpec, r: Position, big_r: Position, t: f64) -> Result<EntangledTerm> {
    let sol = recoil_solution(kx, screen)?;
    let i = Complex64::i();
    let photon = (i * (kx * r[0] + sol.kz_tilde * r[1] - sol.photon_energy() * t)).exp();
    let screen_part = (i * (sol.screen_kx * big_r[0] + sol.screen_kz_tilde * big_r[1] - sol.screen_energy_complex() * t)).exp();
    Ok(EntangledTerm {
        photon,
        screen: screen_part,
        product: photon * screen_part,
        time_factor: (-i * sol.combined_frequency() * t).exp(),
    })
}
