//! The `k_x` spectrum behind a screen: grating modes, running/crawling
//! classification, decay depths and phase velocities.
//!
//! All wavenumbers are in units of `k0`, lengths in units of `1/k0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeKind {
    RunningWave,
    CrawlingWave,
}

impl ModeKind {
    pub fn label(self) -> &'static str {
        match self {
            ModeKind::RunningWave => "RW",
            ModeKind::CrawlingWave => "CW",
        }
    }
}

/// Which side of the screen a crawling mode lives on; fixes the sign of `Im k̃_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Side {
    #[default]
    Transmission,
    Incidence,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Transmission => 1.0,
            Side::Incidence => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub kx: f64,
    pub kind: ModeKind,
    /// Decay constant along z, zero for running waves.
    pub chi_z: f64,
    pub kz: Complex64,
}

impl Mode {
    /// Classify `kx` against `threshold` (1 for a fixed screen). The boundary
    /// `|kx| = threshold` counts as a running wave with `k_z = 0`.
    pub fn classify(kx: f64, threshold: f64, side: Side) -> Result<Mode> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(Error::domain(
                "classify",
                format!("threshold must lie in (0, 1], got {threshold}"),
            ));
        }
        if !kx.is_finite() {
            return Err(Error::domain("classify", format!("kx must be finite, got {kx}")));
        }
        let a = kx.abs();
        // (t - a)(t + a) keeps the small difference exact near the boundary
        if a <= threshold {
            let kz = ((threshold - a) * (threshold + a)).sqrt();
            Ok(Mode {
                kx,
                kind: ModeKind::RunningWave,
                chi_z: 0.0,
                kz: Complex64::new(kz, 0.0),
            })
        } else {
            let chi = ((a - threshold) * (a + threshold)).sqrt();
            Ok(Mode {
                kx,
                kind: ModeKind::CrawlingWave,
                chi_z: chi,
                kz: Complex64::new(0.0, side.sign() * chi),
            })
        }
    }

    /// Fixed screen, transmission side.
    pub fn fixed(kx: f64) -> Mode {
        Self::classify(kx, 1.0, Side::Transmission).expect("threshold 1 is valid")
    }

    pub fn is_evanescent(&self) -> bool {
        self.kind == ModeKind::CrawlingWave
    }
}

/// Grating with period `d`, stored in units of the input wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingSpec {
    period: f64,
}

impl GratingSpec {
    /// `period` is `d/λ0`.
    pub fn new(period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::domain(
                "GratingSpec::new",
                format!("period must be positive, got {period}"),
            ));
        }
        Ok(GratingSpec { period })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `k_d/k0 = λ0/d`.
    pub fn kd(&self) -> f64 {
        1.0 / self.period
    }

    /// Highest running order, `floor(d/λ0)`.
    pub fn m_c(&self) -> i64 {
        self.period.floor() as i64
    }

    /// `k_x^(m)/k0 = m λ0/d`.
    pub fn kx(&self, m: i64) -> f64 {
        m as f64 / self.period
    }
}

/// Orders `-m_max..=m_max`, sorted by `m`.
pub fn grating_modes(grating: &GratingSpec, m_max: u32) -> Result<Vec<(i64, Mode)>> {
    if m_max < 1 {
        return Err(Error::domain("grating_modes", "m_max must be at least 1"));
    }
    let m_max = m_max as i64;
    let m_c = grating.m_c();
    Ok((-m_max..=m_max)
        .map(|m| {
            let mut mode = Mode::fixed(grating.kx(m));
            // the integer rule is authoritative for grating orders
            let cw = m.abs() > m_c;
            debug_assert_eq!(cw, mode.is_evanescent(), "m = {m}, d = {}", grating.period);
            mode.kind = if cw { ModeKind::CrawlingWave } else { ModeKind::RunningWave };
            (m, mode)
        })
        .collect())
}

/// `u/c = 1/kx`, signed.
pub fn phase_velocity(kx: f64) -> Result<f64> {
    if kx == 0.0 {
        return Err(Error::domain(
            "phase_velocity",
            "kx = 0 propagates purely along z; phase velocity along the screen is infinite",
        ));
    }
    Ok(1.0 / kx)
}

/// `λ/λ0 = 1/|kx|`.
pub fn compressed_wavelength(kx: f64) -> Result<f64> {
    if kx == 0.0 {
        return Err(Error::domain("compressed_wavelength", "kx = 0 has no wavelength along x"));
    }
    Ok(1.0 / kx.abs())
}

/// `z_d k0 = 1/sqrt(kx² - 1)`.
pub fn decay_depth(kx: f64) -> Result<f64> {
    let mode = Mode::fixed(kx);
    if !mode.is_evanescent() {
        return Err(Error::NotEvanescent { kx, threshold: 1.0 });
    }
    Ok(1.0 / mode.chi_z)
}
