//! Scenario files. TOML, every table optional.

use std::path::{Path, PathBuf};

use evanescent::aperture::{ApertureProfile, TabulatedProfile};
use evanescent::probe::Section2Inputs;
use evanescent::quantities::{ScaledUnits, CODATA};
use evanescent::recoil::ScreenSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Input wavenumber in 1/m.
    pub k0_si: f64,
    pub screen: ScreenConfig,
    pub aperture: ApertureConfig,
    pub probe: ProbeConfig,
    pub grids: Grids,
    pub spectrum: SpectrumConfig,
    pub lifetime: LifetimeConfig,
    pub section2: Section2Inputs,
    pub section5: Section5Config,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            k0_si: 7.5e6,
            screen: ScreenConfig::default(),
            aperture: ApertureConfig::default(),
            probe: ProbeConfig::default(),
            grids: Grids::default(),
            spectrum: SpectrumConfig::default(),
            lifetime: LifetimeConfig::default(),
            section2: Section2Inputs::default(),
            section5: Section5Config::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScreenConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(default, rename = "K_M_ratio", skip_serializing_if = "Option::is_none")]
    pub k_m_ratio: Option<f64>,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        ScreenConfig {
            mass_kg: Some(0.1),
            k_m_ratio: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ApertureConfig {
    SingleSlit {
        a: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Gaussian {
        w: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// CSV of `kx,F` rows, relative to the config file.
    Tabulated {
        path: PathBuf,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for ApertureConfig {
    fn default() -> Self {
        ApertureConfig::SingleSlit { a: 1.0, scale: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Particle {
    Electron,
    Custom { mass_kg: f64 },
}

impl Particle {
    pub fn mass_kg(self) -> f64 {
        match self {
            Particle::Electron => CODATA.electron_mass,
            Particle::Custom { mass_kg } => mass_kg,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeConfig {
    pub particle: Particle,
    #[serde(rename = "K0_ratio")]
    pub k0_ratio: f64,
    pub z0: f64,
    pub delta_z: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            particle: Particle::Electron,
            k0_ratio: 1e6,
            z0: 1.0,
            delta_z: 0.5,
        }
    }
}

/// Either an explicit list or an inclusive range of `count` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }

    fn validate(&self, path: &str) -> Result<(), CliError> {
        match self {
            Grid::List(v) => {
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(CliError::config(path, "grid values must be finite"));
                }
            }
            Grid::Range { start, stop, count } => {
                if !(start.is_finite() && stop.is_finite()) {
                    return Err(CliError::config(path, "range ends must be finite"));
                }
                if stop < start {
                    return Err(CliError::config(path, "range must satisfy start <= stop"));
                }
                if *count == 0 {
                    return Err(CliError::config(path, "range needs count >= 1"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    pub kx: Grid,
    pub x: Grid,
    pub z: Grid,
}

impl Default for Grids {
    fn default() -> Self {
        Grids {
            kx: Grid::List(vec![0.0, 0.5, 2.0, 5.0, 10.0]),
            x: Grid::Range {
                start: -3.0,
                stop: 3.0,
                count: 13,
            },
            z: Grid::Range {
                start: 0.0,
                stop: 2.0,
                count: 5,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumConfig {
    /// Grating period `d/λ0`; without it the `kx` grid is listed instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    pub m_max: u32,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            period: Some(2.5),
            m_max: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LifetimeConfig {
    pub tau_max_s: Vec<f64>,
}

impl Default for LifetimeConfig {
    fn default() -> Self {
        LifetimeConfig { tau_max_s: vec![1e17] }
    }
}

/// The heavy-screen lifetime example: one deep mode, one lifetime cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Section5Config {
    pub kx: f64,
    pub tau_max_s: f64,
    pub quoted_tau_s: f64,
    pub quoted_tau_years: f64,
}

impl Default for Section5Config {
    fn default() -> Self {
        Section5Config {
            kx: 10.0,
            tau_max_s: 1e17,
            quoted_tau_s: 1.8e18,
            quoted_tau_years: 6e10,
        }
    }
}

/// Where the config came from, for relative paths.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub base_dir: PathBuf,
}

pub fn load(path: Option<&Path>) -> Result<Loaded, CliError> {
    let Some(path) = path else {
        let config = ScenarioConfig::default();
        config.validate()?;
        return Ok(Loaded {
            config,
            base_dir: PathBuf::from("."),
        });
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("", format!("cannot read {}: {e}", path.display())))?;
    let config = parse(&text)?;
    Ok(Loaded {
        config,
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

pub fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = toml::Deserializer::new(text);
    let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { "" } else { &path }, e.into_inner().message().trim().to_string())
    })?;
    config.validate()?;
    Ok(config)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.k0_si > 0.0 && self.k0_si.is_finite()) {
            return Err(CliError::config("k0_si", "must be positive and finite"));
        }
        match (self.screen.mass_kg, self.screen.k_m_ratio) {
            (Some(m), None) if m > 0.0 && m.is_finite() => {}
            (None, Some(k)) if k > 0.0 && k.is_finite() => {}
            (Some(_), None) => return Err(CliError::config("screen.mass_kg", "must be positive and finite")),
            (None, Some(_)) => return Err(CliError::config("screen.K_M_ratio", "must be positive and finite")),
            _ => return Err(CliError::config("screen", "give exactly one of mass_kg and K_M_ratio")),
        }
        let (name, width, scale) = match &self.aperture {
            ApertureConfig::SingleSlit { a, scale } => ("aperture.a", Some(*a), *scale),
            ApertureConfig::Gaussian { w, scale } => ("aperture.w", Some(*w), *scale),
            ApertureConfig::Tabulated { scale, .. } => ("aperture.path", None, *scale),
        };
        if let Some(w) = width {
            if !(w > 0.0 && w.is_finite()) {
                return Err(CliError::config(name, "must be positive and finite"));
            }
        }
        if !scale.is_finite() {
            return Err(CliError::config("aperture.scale", "must be finite"));
        }
        if let Particle::Custom { mass_kg } = self.probe.particle {
            if !(mass_kg > 0.0 && mass_kg.is_finite()) {
                return Err(CliError::config("probe.particle.custom.mass_kg", "must be positive and finite"));
            }
        }
        if !self.probe.k0_ratio.is_finite() {
            return Err(CliError::config("probe.K0_ratio", "must be finite"));
        }
        if !(self.probe.z0 >= 0.0 && self.probe.z0.is_finite()) {
            return Err(CliError::config("probe.z0", "must be non-negative and finite"));
        }
        if !(self.probe.delta_z > 0.0 && self.probe.delta_z.is_finite()) {
            return Err(CliError::config("probe.delta_z", "must be positive and finite"));
        }
        self.grids.kx.validate("grids.kx")?;
        self.grids.x.validate("grids.x")?;
        self.grids.z.validate("grids.z")?;
        if let Some(d) = self.spectrum.period {
            if !(d > 0.0 && d.is_finite()) {
                return Err(CliError::config("spectrum.period", "must be positive and finite"));
            }
        }
        if self.spectrum.m_max < 1 {
            return Err(CliError::config("spectrum.m_max", "must be at least 1"));
        }
        if self.lifetime.tau_max_s.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(CliError::config("lifetime.tau_max_s", "entries must be positive and finite"));
        }
        if !self.section5.kx.is_finite() {
            return Err(CliError::config("section5.kx", "must be finite"));
        }
        if !(self.section5.tau_max_s > 0.0 && self.section5.tau_max_s.is_finite()) {
            return Err(CliError::config("section5.tau_max_s", "must be positive and finite"));
        }
        Ok(())
    }

    pub fn units(&self) -> ScaledUnits {
        ScaledUnits::new(self.k0_si).expect("validated")
    }

    pub fn screen_spec(&self) -> ScreenSpec {
        let units = self.units();
        match (self.screen.mass_kg, self.screen.k_m_ratio) {
            (Some(m), _) => ScreenSpec::from_mass(m, &units).expect("validated"),
            (None, Some(k)) => ScreenSpec::new(k).expect("validated"),
            (None, None) => unreachable!("validated"),
        }
    }

    /// Screen mass in kg, given directly or recovered from `K_M`.
    pub fn screen_mass_kg(&self) -> f64 {
        match (self.screen.mass_kg, self.screen.k_m_ratio) {
            (Some(m), _) => m,
            (None, Some(k)) => k * CODATA.hbar * self.k0_si / CODATA.c,
            (None, None) => unreachable!("validated"),
        }
    }

    /// `K_μ = μc/(ħ k0)` of the probe particle.
    pub fn k_mu(&self) -> f64 {
        self.units().compton_ratio(self.probe.particle.mass_kg())
    }

    pub fn profile(&self, base_dir: &Path) -> Result<ApertureProfile, CliError> {
        let p = match &self.aperture {
            ApertureConfig::SingleSlit { a, scale } => ApertureProfile::single_slit(*a)?.scaled(*scale),
            ApertureConfig::Gaussian { w, scale } => ApertureProfile::gaussian(*w)?.scaled(*scale),
            ApertureConfig::Tabulated { path, scale } => {
                let full = base_dir.join(path);
                let t = TabulatedProfile::from_csv_path(&full)
                    .map_err(|e| CliError::config("aperture.path", format!("{}: {e}", full.display())))?;
                ApertureProfile::tabulated(t).scaled(*scale)
            }
        };
        Ok(p)
    }

    /// Slit width used by the lifetime tail, when the aperture is a slit.
    pub fn slit_width(&self) -> Option<f64> {
        match self.aperture {
            ApertureConfig::SingleSlit { a, .. } => Some(a),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        let c = parse("").unwrap();
        assert_eq!(c.k0_si, 7.5e6);
        assert_eq!(c.screen.mass_kg, Some(0.1));
    }

    #[test]
    fn error_carries_field_path() {
        let e = parse("[probe]\nz0 = \"high\"\n").unwrap_err();
        match e {
            CliError::Config { path, .. } => assert_eq!(path, "probe.z0"),
            other => panic!("{other:?}"),
        }
        let e = parse("[screen]\nmass_kg = 1.0\nK_M_ratio = 3.0\n").unwrap_err();
        assert!(matches!(e, CliError::Config { ref path, .. } if path == "screen"));
        let e = parse("[grids]\nx = { start = 2.0, stop = 1.0, count = 3 }\n").unwrap_err();
        assert!(matches!(e, CliError::Config { ref path, .. } if path == "grids.x"));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse("k0 = 1.0\n").is_err());
    }

    #[test]
    fn range_points() {
        let g = Grid::Range {
            start: 0.0,
            stop: 1.0,
            count: 5,
        };
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn particles() {
        let c = parse("[probe]\nparticle = { custom = { mass_kg = 2.0e-27 } }\n").unwrap();
        assert_eq!(c.probe.particle.mass_kg(), 2.0e-27);
        let c = parse("[probe]\nparticle = \"electron\"\n").unwrap();
        assert_eq!(c.probe.particle, Particle::Electron);
    }
}
