//! Absorption of a crawling photon by a Gaussian probe packet, and the
//! spreading of that packet in flight.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::aperture::ApertureProfile;
use crate::error::{Error, Result};
use crate::mode_spectrum::{decay_depth, Mode};
use crate::quadrature::{integrate, integrate_semi_infinite, QuadOptions};
use crate::quantities::CODATA;
use crate::special::erfcx;

/// Probe wave packet `Φ ∝ exp(-σ²(z - z0)²/2) e^{iK0 x}`, lengths in `1/k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub z0: f64,
    pub delta_z: f64,
    /// `1/(√2 Δz)`.
    pub sigma: f64,
    /// Propagation number `K0/k0`; carried along, unused by the overlap.
    pub k0_ratio: f64,
}

impl GaussianPacket {
    pub fn new(z0: f64, delta_z: f64, k0_ratio: f64) -> Result<Self> {
        if !(delta_z > 0.0 && delta_z.is_finite()) {
            return Err(Error::domain("GaussianPacket::new", format!("delta_z must be positive, got {delta_z}")));
        }
        if !(z0 >= 0.0 && z0.is_finite()) {
            return Err(Error::domain("GaussianPacket::new", format!("z0 must be non-negative, got {z0}")));
        }
        Ok(GaussianPacket {
            z0,
            delta_z,
            sigma: FRAC_1_SQRT_2 / delta_z,
            k0_ratio,
        })
    }

    /// Packet given by `σ` directly.
    pub fn from_sigma(z0: f64, sigma: f64, k0_ratio: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain("GaussianPacket::from_sigma", format!("sigma must be positive, got {sigma}")));
        }
        let mut p = Self::new(z0, FRAC_1_SQRT_2 / sigma, k0_ratio)?;
        p.sigma = sigma;
        Ok(p)
    }
}

/// `∫₀^∞ exp(-σ²(z - z0)²/2 - χ z) dz` in a form that never overflows.
pub fn overlap_integral(chi: f64, sigma: f64, z0: f64) -> f64 {
    let prefactor = (2.0 * PI).sqrt() / (2.0 * sigma);
    let u = (chi / sigma - sigma * z0) / 2f64.sqrt();
    let gauss = (-0.5 * (sigma * z0).powi(2)).exp();
    if u >= 0.0 {
        prefactor * gauss * erfcx(u)
    } else {
        // erfc(u) = 2 - erfc(-u); the exponent χ²/(2σ²) - χ z0 is negative here
        let lead = 2.0 * (chi * (0.5 * chi / (sigma * sigma) - z0)).exp();
        prefactor * (lead - gauss * erfcx(-u))
    }
}

/// The same integral by adaptive quadrature, for cross-checks.
pub fn overlap_integral_quadrature(chi: f64, sigma: f64, z0: f64, opts: &QuadOptions) -> Result<f64> {
    let f = |z: f64| (-0.5 * (sigma * (z - z0)).powi(2) - chi * z).exp();
    // split at the peak of the integrand so the adaptive rule sees it
    let peak = (z0 - chi / (sigma * sigma)).max(0.0);
    let width = (1.0 / sigma).min(1.0 / chi.max(f64::MIN_POSITIVE));
    let cut = peak + 10.0 * width;
    let head = integrate(f, 0.0, cut, &opts.panels(16))?;
    let tail = integrate_semi_infinite(f, cut, opts)?;
    Ok(head.value + tail.value)
}

fn crawling(kx: f64) -> Result<Mode> {
    let mode = Mode::fixed(kx);
    if !mode.is_evanescent() {
        return Err(Error::NotEvanescent { kx, threshold: 1.0 });
    }
    Ok(mode)
}

/// `|F(k_x) I|²`, with the normalization of the packet dropped.
pub fn absorption_probability(kx: f64, packet: &GaussianPacket, profile: &ApertureProfile) -> Result<f64> {
    let mode = crawling(kx)?;
    let i = overlap_integral(mode.chi_z, packet.sigma, packet.z0);
    Ok((profile.amplitude(kx) * i).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HighKxLimit {
    /// `|F|²/(k_x² - 1)`.
    pub exact: f64,
    /// `|F|²/k_x²`.
    pub approx: f64,
}

/// The `σ → 0` limit of [`absorption_probability`].
pub fn high_kx_limit(kx: f64, profile: &ApertureProfile) -> Result<HighKxLimit> {
    let mode = crawling(kx)?;
    let f2 = profile.amplitude_sq(kx);
    Ok(HighKxLimit {
        exact: f2 / (mode.chi_z * mode.chi_z),
        approx: f2 / (kx * kx),
    })
}

/// Width of a free Gaussian packet after time `t`, all in SI.
pub fn packet_spread(delta_z: f64, t: f64, mass: f64) -> Result<f64> {
    if !(delta_z > 0.0) || !(t >= 0.0) || !(mass > 0.0) {
        return Err(Error::domain(
            "packet_spread",
            format!("need delta_z > 0, t >= 0, mass > 0; got {delta_z}, {t}, {mass}"),
        ));
    }
    let r = CODATA.hbar * t / (2.0 * mass * delta_z * delta_z);
    Ok(delta_z * r.hypot(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section2Report {
    pub lambda0_m: f64,
    pub kx: f64,
    pub velocity_m_per_s: f64,
    pub distance_m: f64,
    pub flight_time_s: f64,
    pub quoted_flight_time_s: f64,
    /// `1/χ_z` with `k0 = 2π/λ0`.
    pub z_d_exact_m: f64,
    /// `λ0/χ_z`, the reading that gives `≈ 0.2 λ0`.
    pub z_d_reduced_m: f64,
    pub z_d_exact_over_lambda0: f64,
    pub z_d_reduced_over_lambda0: f64,
    /// Initial width used for the spread, `0.2 λ0`.
    pub delta_z_m: f64,
    pub spread_ratio: f64,
    pub spread_ratio_at_quoted_time: f64,
    pub spread_ratio_from_reduced_z_d: f64,
    pub spread_ratio_from_exact_z_d: f64,
    pub quoted_spread_ratio: f64,
    /// The spread exceeds the decay depth by at least three orders of magnitude.
    pub exceeds_three_orders: bool,
}

/// Inputs of the flight-time scenario; the default is the electron at
/// `v = 1e-3 c` crossing 0.1 m towards a screen lit at `λ0 = 0.5 μm`,
/// probing the mode `|k_x| = 5 k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Section2Inputs {
    pub lambda0_m: f64,
    pub kx: f64,
    /// `v/c`.
    pub velocity_fraction: f64,
    pub distance_m: f64,
    /// Initial packet width in units of `λ0`.
    pub delta_z_over_lambda0: f64,
    pub quoted_flight_time_s: f64,
    pub quoted_spread_ratio: f64,
}

impl Default for Section2Inputs {
    fn default() -> Self {
        Section2Inputs {
            lambda0_m: 0.5e-6,
            kx: 5.0,
            velocity_fraction: 1e-3,
            distance_m: 0.1,
            delta_z_over_lambda0: 0.2,
            quoted_flight_time_s: 3e-7,
            quoted_spread_ratio: 1.5e3,
        }
    }
}

pub fn scenario_section2() -> Section2Report {
    scenario_section2_with(&Section2Inputs::default()).expect("default inputs are valid")
}

pub fn scenario_section2_with(inputs: &Section2Inputs) -> Result<Section2Report> {
    let lambda0 = inputs.lambda0_m;
    let kx = inputs.kx;
    let v = inputs.velocity_fraction * CODATA.c;
    if !(lambda0 > 0.0 && v > 0.0 && inputs.distance_m >= 0.0 && inputs.delta_z_over_lambda0 > 0.0) {
        return Err(Error::domain(
            "scenario_section2",
            "need positive wavelength, velocity and width, and a non-negative distance",
        ));
    }
    let t = inputs.distance_m / v;
    let zd_hat = decay_depth(kx)?;
    let z_d_exact = zd_hat * lambda0 / (2.0 * PI);
    let z_d_reduced = zd_hat * lambda0;
    let delta_z = inputs.delta_z_over_lambda0 * lambda0;
    let m = CODATA.electron_mass;
    let ratio = |dz: f64, time: f64| packet_spread(dz, time, m).map(|s| s / dz);
    let spread_ratio = ratio(delta_z, t)?;
    Ok(Section2Report {
        lambda0_m: lambda0,
        kx,
        velocity_m_per_s: v,
        distance_m: inputs.distance_m,
        flight_time_s: t,
        quoted_flight_time_s: inputs.quoted_flight_time_s,
        z_d_exact_m: z_d_exact,
        z_d_reduced_m: z_d_reduced,
        z_d_exact_over_lambda0: z_d_exact / lambda0,
        z_d_reduced_over_lambda0: z_d_reduced / lambda0,
        delta_z_m: delta_z,
        spread_ratio,
        spread_ratio_at_quoted_time: ratio(delta_z, inputs.quoted_flight_time_s)?,
        spread_ratio_from_reduced_z_d: ratio(z_d_reduced, t)?,
        spread_ratio_from_exact_z_d: ratio(z_d_exact, t)?,
        quoted_spread_ratio: inputs.quoted_spread_ratio,
        exceeds_three_orders: spread_ratio > 1e3,
    })
}
