//! Physical constants, the dimensionless unit system and a few numerically
//! stable primitives.
//!
//! Everything downstream works in ratios against the input photon
//! wavenumber `k0` and the photon energy `ε0 = ħ c k0`. A macroscopic screen
//! has `Mc/ħ` around `1e34 k0`, so expressions that would subtract nearly
//! equal numbers are rewritten here once and reused.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex quantity in scaled units. Tilde quantities (`k̃_z`, `ε̃`, ...) are
/// always carried as explicit `(re, im)` pairs.
pub type ComplexScalar = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// J·s
    pub hbar: f64,
    /// m/s
    pub c: f64,
    /// kg
    pub electron_mass: f64,
}

/// CODATA 2018 values.
pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 2.997_924_58e8,
    electron_mass: 9.109_383_701_5e-31,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA
    }
}

impl PhysicalConstants {
    /// Compton-scale wavenumber `mc/ħ` in 1/m.
    pub fn compton_wavenumber(&self, mass: f64) -> f64 {
        mass * self.c / self.hbar
    }
}

/// Reference scale for the dimensionless representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledUnits {
    k0: f64,
}

impl ScaledUnits {
    /// `k0` in 1/m.
    pub fn new(k0: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::domain("ScaledUnits::new", format!("k0 must be positive, got {k0}")));
        }
        Ok(ScaledUnits { k0 })
    }

    pub fn from_wavelength(lambda0: f64) -> Result<Self> {
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(Error::domain(
                "ScaledUnits::from_wavelength",
                format!("wavelength must be positive, got {lambda0}"),
            ));
        }
        Self::new(2.0 * PI / lambda0)
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// `ε0 = ħ c k0` in J.
    pub fn epsilon0(&self) -> f64 {
        CODATA.hbar * CODATA.c * self.k0
    }

    /// `λ0 = 2π/k0` in m.
    pub fn lambda0(&self) -> f64 {
        2.0 * PI / self.k0
    }

    /// `ω0 = c k0` in 1/s.
    pub fn omega0(&self) -> f64 {
        CODATA.c * self.k0
    }

    /// Compton wavenumber of `mass` in units of `k0`.
    pub fn compton_ratio(&self, mass: f64) -> f64 {
        CODATA.compton_wavenumber(mass) / self.k0
    }

    pub fn to_si(&self, value: f64, kind: QuantityKind) -> f64 {
        match kind {
            QuantityKind::Wavenumber => value * self.k0,
            QuantityKind::Energy => value * self.epsilon0(),
            QuantityKind::Length => value / self.k0,
            QuantityKind::Time => value / self.omega0(),
            QuantityKind::Velocity => value * CODATA.c,
        }
    }

    pub fn from_si(&self, value: f64, kind: QuantityKind) -> f64 {
        match kind {
            QuantityKind::Wavenumber => value / self.k0,
            QuantityKind::Energy => value / self.epsilon0(),
            QuantityKind::Length => value * self.k0,
            QuantityKind::Time => value * self.omega0(),
            QuantityKind::Velocity => value / CODATA.c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantityKind {
    Wavenumber,
    Energy,
    Length,
    Time,
    Velocity,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 5] = [
        QuantityKind::Wavenumber,
        QuantityKind::Energy,
        QuantityKind::Length,
        QuantityKind::Time,
        QuantityKind::Velocity,
    ];

    fn name(self) -> &'static str {
        match self {
            QuantityKind::Wavenumber => "wavenumber",
            QuantityKind::Energy => "energy",
            QuantityKind::Length => "length",
            QuantityKind::Time => "time",
            QuantityKind::Velocity => "velocity",
        }
    }
}

impl fmt::Display for QuantityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuantityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuantityKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Convert by kind name; unknown names are an error.
pub fn to_si(value: f64, kind: &str, units: &ScaledUnits) -> Result<f64> {
    Ok(units.to_si(value, kind.parse()?))
}

/// `1 - (1 + mu)^(-1/2)` without cancellation for small `mu`.
pub fn stable_one_minus_inv_sqrt1p(mu: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::domain(
            "stable_one_minus_inv_sqrt1p",
            format!("mu must be non-negative, got {mu}"),
        ));
    }
    if mu.is_infinite() {
        return Ok(1.0);
    }
    let s = (1.0 + mu).sqrt();
    Ok(mu / (s * (1.0 + s)))
}

/// `sqrt(a^2 + s) - a` for `a > 0`, complex `s`, evaluated as `s / (sqrt(a^2 + s) + a)`.
pub(crate) fn sqrt_shift_minus(a: f64, s: Complex64) -> Complex64 {
    let root = (Complex64::new(a * a, 0.0) + s).sqrt();
    s / (root + a)
}

/// Tolerance-based comparison of complex values.
pub fn complex_close(a: Complex64, b: Complex64, rel: f64, abs: f64) -> bool {
    let diff = (a - b).norm();
    diff <= abs || diff <= rel * a.norm().max(b.norm())
}
