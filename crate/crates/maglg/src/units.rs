//! Physical constants and conversion from laboratory inputs to internal units.
//!
//! Internal convention: lengths in nanometres, wavenumbers in 1/nm, energies
//! in eV. The magnetic field enters only through the magnetic waist
//! `w_m = 2 sqrt(hbar / (|e| B))` and the magnetic Rayleigh range
//! `z_m = k w_m^2 / 2`, so all propagation code is field-agnostic apart from
//! the signed coupling `e B` (the electron charge is negative).

use serde::Serialize;

use crate::error::{Error, Result};

/// CODATA 2018 fundamental constants in SI units (exact where so defined).
#[derive(Debug, Clone, Copy)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub hbar_j_s: f64,
    /// Speed of light in vacuum, m/s (exact).
    pub c_m_per_s: f64,
    /// Electron rest energy, eV.
    pub electron_rest_energy_ev: f64,
    /// Elementary charge, C (exact).
    pub elementary_charge_c: f64,
}

/// The constants used throughout the crate.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar_j_s: 1.054_571_817e-34,
    c_m_per_s: 299_792_458.0,
    electron_rest_energy_ev: 510_998.95,
    elementary_charge_c: 1.602_176_634e-19,
};

/// Nanometres per metre.
pub const NM_PER_M: f64 = 1.0e9;

/// hbar * c in eV nm, the bridge between energies and wavenumbers.
pub fn hbar_c_ev_nm() -> f64 {
    CONSTANTS.hbar_j_s * CONSTANTS.c_m_per_s / CONSTANTS.elementary_charge_c * NM_PER_M
}

/// Raw laboratory inputs in SI-flavoured units.
#[derive(Debug, Clone, Copy)]
pub struct LabInputs {
    /// Magnetic field along the beam axis, tesla. Zero means free space.
    pub b_tesla: f64,
    /// Electron kinetic energy, eV.
    pub kinetic_ev: f64,
    /// Injected beam waist, metres.
    pub w0_m: f64,
}

impl LabInputs {
    /// Validate the inputs. The field may be zero (free space) but not
    /// negative; the orientation is fixed by convention.
    pub fn new(b_tesla: f64, kinetic_ev: f64, w0_m: f64) -> Result<Self> {
        if !(kinetic_ev > 0.0) {
            return Err(Error::NonPositiveKineticEnergy(kinetic_ev));
        }
        if !(w0_m > 0.0) {
            return Err(Error::NonPositiveWaist(w0_m));
        }
        if !(b_tesla >= 0.0) {
            return Err(Error::NegativeField(b_tesla));
        }
        Ok(Self {
            b_tesla,
            kinetic_ev,
            w0_m,
        })
    }
}

/// Magnetic length scales, or their absence in free space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldScales {
    /// No magnetic field.
    Free,
    /// Uniform field with its derived length scales.
    Magnetic {
        /// Field strength, tesla.
        b_tesla: f64,
        /// Magnetic waist `2 sqrt(hbar/(|e| B))`, nm.
        w_m: f64,
        /// Magnetic Rayleigh range `k w_m^2 / 2`, nm.
        z_m: f64,
    },
}

/// Geometry of a beam in internal units: wavenumbers in 1/nm, lengths in nm.
#[derive(Debug, Clone, Copy)]
pub struct BeamGeometry {
    /// Axial wavenumber `k = p c / (hbar c)`, 1/nm.
    pub k: f64,
    /// Reduced Compton wavenumber `m c^2 / (hbar c)`, 1/nm.
    pub compton_k: f64,
    /// Injected waist, nm.
    pub w0: f64,
    /// Free-space Rayleigh range `k w0^2 / 2`, nm.
    pub z_r: f64,
    /// Magnetic scales, if any.
    pub field: FieldScales,
}

impl BeamGeometry {
    /// Whether a magnetic field is present.
    pub fn is_magnetic(&self) -> bool {
        matches!(self.field, FieldScales::Magnetic { .. })
    }

    /// Magnetic waist in nm; errors in free space.
    pub fn w_m(&self) -> Result<f64> {
        match self.field {
            FieldScales::Magnetic { w_m, .. } => Ok(w_m),
            FieldScales::Free => Err(Error::FreeSpace),
        }
    }

    /// Magnetic Rayleigh range in nm; errors in free space.
    pub fn z_m(&self) -> Result<f64> {
        match self.field {
            FieldScales::Magnetic { z_m, .. } => Ok(z_m),
            FieldScales::Free => Err(Error::FreeSpace),
        }
    }

    /// Field strength in tesla (zero in free space).
    pub fn b_tesla(&self) -> f64 {
        match self.field {
            FieldScales::Magnetic { b_tesla, .. } => b_tesla,
            FieldScales::Free => 0.0,
        }
    }

    /// Signed coupling `e B` in units of 1/nm^2, with `e = -|e|` for the
    /// electron: `e B = -4 / w_m^2`. Zero in free space.
    pub fn eb_per_nm2(&self) -> f64 {
        match self.field {
            FieldScales::Magnetic { w_m, .. } => -4.0 / (w_m * w_m),
            FieldScales::Free => 0.0,
        }
    }

    /// Total relativistic energy `sqrt((pc)^2 + (mc^2)^2)` in eV.
    pub fn energy_ev(&self) -> f64 {
        let hbc = hbar_c_ev_nm();
        ((self.k * hbc).powi(2) + (self.compton_k * hbc).powi(2)).sqrt()
    }

    /// Relativistic momentum times c, in eV.
    pub fn momentum_ev(&self) -> f64 {
        self.k * hbar_c_ev_nm()
    }

    /// Kinetic energy in eV.
    pub fn kinetic_ev(&self) -> f64 {
        self.energy_ev() - CONSTANTS.electron_rest_energy_ev
    }

    /// The natural axial length scale: `z_m` in a field, `z_r` in free space.
    pub fn axial_scale(&self) -> f64 {
        match self.field {
            FieldScales::Magnetic { z_m, .. } => z_m,
            FieldScales::Free => self.z_r,
        }
    }
}

/// Convert laboratory inputs to internal beam geometry.
///
/// The axial wavenumber follows from the relativistic dispersion
/// `(pc)^2 = T (T + 2 m c^2)`, and the magnetic waist from
/// `w_m = 2 sqrt(hbar / (|e| B))`.
pub fn geometry_from_lab(inputs: LabInputs) -> Result<BeamGeometry> {
    let hbc = hbar_c_ev_nm();
    let t = inputs.kinetic_ev;
    let mc2 = CONSTANTS.electron_rest_energy_ev;
    let pc = (t * (t + 2.0 * mc2)).sqrt();
    let k = pc / hbc;
    let compton_k = mc2 / hbc;
    let w0 = inputs.w0_m * NM_PER_M;
    let z_r = 0.5 * k * w0 * w0;
    let field = if inputs.b_tesla == 0.0 {
        FieldScales::Free
    } else {
        let w_m_m = 2.0
            * (CONSTANTS.hbar_j_s / (CONSTANTS.elementary_charge_c * inputs.b_tesla)).sqrt();
        let w_m = w_m_m * NM_PER_M;
        let z_m = 0.5 * k * w_m * w_m;
        FieldScales::Magnetic {
            b_tesla: inputs.b_tesla,
            w_m,
            z_m,
        }
    };
    Ok(BeamGeometry {
        k,
        compton_k,
        w0,
        z_r,
        field,
    })
}

/// Serializable record of the unit conventions, for output sidecars.
#[derive(Debug, Clone, Serialize)]
pub struct UnitConventions {
    pub length: &'static str,
    pub wavenumber: &'static str,
    pub energy: &'static str,
}

impl Default for UnitConventions {
    fn default() -> Self {
        Self {
            length: "nm",
            wavenumber: "1/nm",
            energy: "eV",
        }
    }
}
