//! Configuration ingestion: JSON file, CLI flag overrides, defaults, and
//! the fully-resolved effective configuration echoed into every output
//! directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use maglg::beams::{BeamFamily, BeamQuantumNumbers, FamilyKind, Spin};
use maglg::units::{geometry_from_lab, BeamGeometry, LabInputs};

use crate::error::CliError;
use crate::CliOverrides;

/// JSON configuration file. Every field is optional; unknown keys are
/// rejected so typos fail loudly instead of being silently ignored.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "B_tesla")]
    pub b_tesla: Option<f64>,
    #[serde(rename = "kinetic_keV")]
    pub kinetic_kev: Option<f64>,
    pub w0_nm: Option<f64>,
    pub n: Option<u32>,
    pub ell: Option<i32>,
    /// `"+"` or `"-"`.
    pub spin: Option<String>,
    /// `"free"`, `"landau"`, or `"general"`.
    pub family: Option<String>,
    /// Axial step as a fraction of the natural axial scale; `null` or
    /// absent selects the built-in oracle resolution.
    pub dz_over_zm: Option<f64>,
    /// Radial grid size for propagation; `null` or absent selects the
    /// built-in oracle resolution.
    pub grid_points: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Load and parse a configuration file. Any failure here is a
/// configuration error: the file is part of the run's configuration.
pub fn load_config_file(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read config file {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!("cannot parse config file {}: {e}", path.display()))
    })
}

/// The fully-resolved run configuration after applying the precedence
/// `CLI flags > config file > defaults`. Serializes with the same key
/// names as [`ConfigFile`], so the echoed `effective_config.json` can be
/// passed back via `--config` to reproduce a run exactly.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    #[serde(rename = "B_tesla")]
    pub b_tesla: f64,
    #[serde(rename = "kinetic_keV")]
    pub kinetic_kev: f64,
    pub w0_nm: f64,
    pub n: u32,
    pub ell: i32,
    pub spin: String,
    pub family: String,
    pub dz_over_zm: Option<f64>,
    pub grid_points: Option<usize>,
    pub out: PathBuf,
}

impl EffectiveConfig {
    pub const DEFAULT_B_TESLA: f64 = 1.0;
    pub const DEFAULT_KINETIC_KEV: f64 = 200.0;
    pub const DEFAULT_W0_NM: f64 = 1.0;
    pub const DEFAULT_N: u32 = 1;
    pub const DEFAULT_ELL: i32 = 2;
    pub const DEFAULT_OUT: &'static str = "maglg-out";

    /// Merge CLI flags over an optional config file over the defaults,
    /// then validate every physical field.
    pub fn resolve(cli: &CliOverrides, file: Option<ConfigFile>) -> Result<Self, CliError> {
        let f = file.unwrap_or_default();
        let resolved = Self {
            b_tesla: cli.b_tesla.or(f.b_tesla).unwrap_or(Self::DEFAULT_B_TESLA),
            kinetic_kev: cli
                .kinetic_kev
                .or(f.kinetic_kev)
                .unwrap_or(Self::DEFAULT_KINETIC_KEV),
            w0_nm: cli.w0_nm.or(f.w0_nm).unwrap_or(Self::DEFAULT_W0_NM),
            n: cli.n.or(f.n).unwrap_or(Self::DEFAULT_N),
            ell: cli.ell.or(f.ell).unwrap_or(Self::DEFAULT_ELL),
            spin: cli.spin.clone().or(f.spin).unwrap_or_else(|| "+".into()),
            family: cli
                .family
                .clone()
                .or(f.family)
                .unwrap_or_else(|| "general".into()),
            dz_over_zm: cli.dz_over_zm.or(f.dz_over_zm),
            grid_points: cli.grid_points.or(f.grid_points),
            out: cli
                .out
                .clone()
                .or(f.out)
                .unwrap_or_else(|| PathBuf::from(Self::DEFAULT_OUT)),
        };
        resolved.spin_value()?;
        resolved.family_kind()?;
        resolved.lab_inputs()?;
        if let Some(dz) = resolved.dz_over_zm {
            if !(dz > 0.0) || !dz.is_finite() {
                return Err(CliError::Config(format!(
                    "dz_over_zm must be positive and finite, got {dz}"
                )));
            }
        }
        if let Some(m) = resolved.grid_points {
            if m < 16 {
                return Err(CliError::Config(format!(
                    "grid_points must be at least 16, got {m}"
                )));
            }
        }
        Ok(resolved)
    }

    /// The validated laboratory inputs.
    pub fn lab_inputs(&self) -> Result<LabInputs, CliError> {
        LabInputs::new(self.b_tesla, self.kinetic_kev * 1e3, self.w0_nm * 1e-9)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// The beam geometry in internal units.
    pub fn geometry(&self) -> Result<BeamGeometry, CliError> {
        Ok(geometry_from_lab(self.lab_inputs()?)?)
    }

    /// The same geometry with the waist replaced by `w0_nm` (used by
    /// commands whose contract fixes the waist-to-magnetic-waist ratio).
    pub fn geometry_with_waist(&self, w0_nm: f64) -> Result<BeamGeometry, CliError> {
        let inputs = LabInputs::new(self.b_tesla, self.kinetic_kev * 1e3, w0_nm * 1e-9)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(geometry_from_lab(inputs)?)
    }

    pub fn spin_value(&self) -> Result<Spin, CliError> {
        match self.spin.as_str() {
            "+" => Ok(Spin::Up),
            "-" => Ok(Spin::Down),
            other => Err(CliError::Config(format!(
                "spin must be \"+\" or \"-\", got {other:?}"
            ))),
        }
    }

    pub fn family_kind(&self) -> Result<FamilyKind, CliError> {
        match self.family.as_str() {
            "free" => Ok(FamilyKind::FreeLg),
            "landau" => Ok(FamilyKind::LandauParaxial),
            "general" => Ok(FamilyKind::GeneralLg),
            other => Err(CliError::Config(format!(
                "family must be \"free\", \"landau\", or \"general\", got {other:?}"
            ))),
        }
    }

    pub fn quantum_numbers(&self) -> Result<BeamQuantumNumbers, CliError> {
        Ok(BeamQuantumNumbers {
            n: self.n,
            ell: self.ell,
            spin: self.spin_value()?,
        })
    }

    /// The configured beam family at the configured waist.
    pub fn family(&self) -> Result<BeamFamily, CliError> {
        Ok(BeamFamily::new(
            self.family_kind()?,
            self.quantum_numbers()?,
            self.geometry()?,
        )?)
    }
}
