//! Evanescent modes behind a diffracting screen: mode spectrum, near field,
//! absorption by a localized probe, and recoil of a free screen.
//!
//! All quantities are dimensionless: wavenumbers in units of the input photon
//! wavenumber `k0`, energies in units of `ħ c k0`, lengths in `1/k0`.

pub mod aperture;
pub mod error;
pub mod mode_spectrum;
pub mod nearfield;
pub mod probe;
pub mod quadrature;
pub mod quantities;
pub mod recoil;
pub mod special;
pub mod transfer;

pub use error::{Error, Result};
pub use quantities::{ComplexScalar, ScaledUnits};
