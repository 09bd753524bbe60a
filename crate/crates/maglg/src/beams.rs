//! Closed-form Laguerre-Gauss beam families.
//!
//! Every family describes a normalized state
//! `Psi(r, phi, z) = A(r, z) exp(i ell phi + i k r^2 / (2 R(z)) - i Phi_G(z))`
//! with amplitude
//! `A = (C_{n ell} / w) (sqrt(2) r / w)^{|ell|} L_n^{|ell|}(2 r^2 / w^2)
//!  exp(-r^2 / w^2)`.
//! The three families differ only in how the width `w(z)`, wavefront
//! curvature `1/R(z)`, and longitudinal phase `Phi_G(z)` evolve:
//!
//! * **FreeLg** — diffractive spreading, `w = w0 sqrt(1 + (z/z_r)^2)`;
//! * **LandauParaxial** — width locked to the magnetic waist `w_m`, flat
//!   wavefronts, and a linear phase `(N + ell + 2 s_z) z / z_m`;
//! * **GeneralLg** — periodic breathing between the injected waist `w0`
//!   and `w_m^2 / w0` with period `pi z_m` in the width.
//!
//! The parameter functions satisfy a closed system of first-order ODEs
//! (width-curvature relation, curvature evolution, and longitudinal phase
//! rate); [`check_parameter_odes`] verifies those by finite differences.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::laguerre::{norm_constant, scaled_value};
use crate::units::{BeamGeometry, UnitConventions};
use crate::wavefunction::RadialWavefunction;

/// Spin projection of the electron on the field axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    #[serde(rename = "+")]
    Up,
    #[serde(rename = "-")]
    Down,
}

impl Spin {
    /// `s_z` as a number: +1/2 or -1/2.
    pub fn value(self) -> f64 {
        match self {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        }
    }

    /// `2 s_z` as an integer: +1 or -1.
    pub fn doubled(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    /// Human-readable label.
    pub fn label(self) -> &'static str {
        match self {
            Spin::Up => "+1/2",
            Spin::Down => "-1/2",
        }
    }

    /// The opposite projection.
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl FromStr for Spin {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "+" | "+1/2" | "up" => Ok(Spin::Up),
            "-" | "-1/2" | "down" => Ok(Spin::Down),
            other => Err(format!(
                "unrecognized spin '{other}': expected '+', '-', '+1/2', '-1/2', 'up', or 'down'"
            )),
        }
    }
}

/// Quantum numbers of an LG mode: radial index, orbital angular momentum,
/// and spin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BeamQuantumNumbers {
    pub n: u32,
    pub ell: i32,
    pub spin: Spin,
}

impl BeamQuantumNumbers {
    /// Principal quantum number `N = 2n + |ell| + 1`.
    pub fn principal(&self) -> i32 {
        2 * self.n as i32 + self.ell.abs() + 1
    }

    /// The combination `ell + 2 s_z` that shifts magnetic phases.
    pub fn gouy_offset(&self) -> i32 {
        self.ell + self.spin.doubled()
    }
}

/// Width, curvature, and longitudinal phase at a fixed axial position.
#[derive(Debug, Clone, Copy)]
pub struct BeamParameters {
    /// Axial position, nm.
    pub z: f64,
    /// Beam width `w(z)`, nm.
    pub w: f64,
    /// Wavefront curvature `1/R(z)`, 1/nm.
    pub inv_r: f64,
    /// Longitudinal (Gouy-like) phase `Phi_G(z)`, rad, continuous in `z`.
    pub gouy: f64,
}

/// Rates of change of the beam parameters at a fixed axial position.
#[derive(Debug, Clone, Copy)]
pub struct BeamParameterRates {
    /// `d w / d z`, dimensionless.
    pub dw_dz: f64,
    /// `d (1/R) / d z`, 1/nm^2.
    pub dinv_r_dz: f64,
    /// `d Phi_G / d z`, rad/nm.
    pub dgouy_dz: f64,
}

/// Which closed-form family a beam belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    FreeLg,
    LandauParaxial,
    GeneralLg,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::FreeLg => "free_lg",
            FamilyKind::LandauParaxial => "landau_paraxial",
            FamilyKind::GeneralLg => "general_lg",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "free" | "free_lg" => Ok(FamilyKind::FreeLg),
            "landau" | "landau_paraxial" => Ok(FamilyKind::LandauParaxial),
            "general" | "general_lg" => Ok(FamilyKind::GeneralLg),
            other => Err(format!(
                "unrecognized family '{other}': expected free, landau, or general"
            )),
        }
    }
}

/// A closed-form beam: family, quantum numbers, and geometry.
#[derive(Debug, Clone, Copy)]
pub struct BeamFamily {
    pub kind: FamilyKind,
    pub qn: BeamQuantumNumbers,
    pub geometry: BeamGeometry,
}

/// `atan(b tan u)` continued smoothly across the poles of `tan`, so the
/// longitudinal phase is monotone in `z` instead of wrapping.
fn unwrapped_atan_tan(b: f64, u: f64) -> f64 {
    let m = (u / std::f64::consts::PI).round();
    let v = u - m * std::f64::consts::PI;
    (b * v.tan()).atan() + m * std::f64::consts::PI
}

impl BeamFamily {
    /// Free-space LG beam; valid with or without a field present in the
    /// geometry (the field is simply ignored).
    pub fn free_lg(qn: BeamQuantumNumbers, geometry: BeamGeometry) -> Self {
        Self {
            kind: FamilyKind::FreeLg,
            qn,
            geometry,
        }
    }

    /// Stationary Landau-paraxial beam; requires a magnetic field.
    pub fn landau(qn: BeamQuantumNumbers, geometry: BeamGeometry) -> Result<Self> {
        if !geometry.is_magnetic() {
            return Err(Error::FreeSpace);
        }
        Ok(Self {
            kind: FamilyKind::LandauParaxial,
            qn,
            geometry,
        })
    }

    /// General oscillating LG beam injected with waist `geometry.w0`;
    /// requires a magnetic field.
    pub fn general_lg(qn: BeamQuantumNumbers, geometry: BeamGeometry) -> Result<Self> {
        if !geometry.is_magnetic() {
            return Err(Error::FreeSpace);
        }
        Ok(Self {
            kind: FamilyKind::GeneralLg,
            qn,
            geometry,
        })
    }

    /// Construct by kind, routing to the family constructors.
    pub fn new(kind: FamilyKind, qn: BeamQuantumNumbers, geometry: BeamGeometry) -> Result<Self> {
        match kind {
            FamilyKind::FreeLg => Ok(Self::free_lg(qn, geometry)),
            FamilyKind::LandauParaxial => Self::landau(qn, geometry),
            FamilyKind::GeneralLg => Self::general_lg(qn, geometry),
        }
    }

    /// Width, curvature, and longitudinal phase at `z`.
    pub fn parameters_at(&self, z: f64) -> BeamParameters {
        let n_f = self.qn.principal() as f64;
        let off = self.qn.gouy_offset() as f64;
        match self.kind {
            FamilyKind::FreeLg => {
                let z_r = self.geometry.z_r;
                let w0 = self.geometry.w0;
                let xi = z / z_r;
                BeamParameters {
                    z,
                    w: w0 * (1.0 + xi * xi).sqrt(),
                    inv_r: z / (z * z + z_r * z_r),
                    gouy: n_f * xi.atan(),
                }
            }
            FamilyKind::LandauParaxial => {
                // Width locked to the magnetic waist; flat wavefronts.
                let w_m = self.geometry.w_m().expect("landau family carries a field");
                let z_m = self.geometry.z_m().expect("landau family carries a field");
                BeamParameters {
                    z,
                    w: w_m,
                    inv_r: 0.0,
                    gouy: (n_f + off) * z / z_m,
                }
            }
            FamilyKind::GeneralLg => {
                let w0 = self.geometry.w0;
                let w_m = self.geometry.w_m().expect("general family carries a field");
                let z_m = self.geometry.z_m().expect("general family carries a field");
                let b = (w_m / w0).powi(2);
                let rho = b * b;
                let u = z / z_m;
                let (sin_u, cos_u) = u.sin_cos();
                let g = cos_u * cos_u + rho * sin_u * sin_u;
                let sin_2u = (2.0 * u).sin();
                BeamParameters {
                    z,
                    w: w0 * g.sqrt(),
                    inv_r: (rho - 1.0) * sin_2u / (2.0 * z_m * g),
                    gouy: n_f * unwrapped_atan_tan(b, u) + off * u,
                }
            }
        }
    }

    /// Analytic `z`-derivatives of the beam parameters at `z`.
    pub fn parameter_rates(&self, z: f64) -> BeamParameterRates {
        let n_f = self.qn.principal() as f64;
        let off = self.qn.gouy_offset() as f64;
        match self.kind {
            FamilyKind::FreeLg => {
                let z_r = self.geometry.z_r;
                let w0 = self.geometry.w0;
                let xi = z / z_r;
                let s = (1.0 + xi * xi).sqrt();
                BeamParameterRates {
                    dw_dz: w0 * xi / (s * z_r),
                    dinv_r_dz: (z_r * z_r - z * z) / (z * z + z_r * z_r).powi(2),
                    dgouy_dz: n_f / (z_r * (1.0 + xi * xi)),
                }
            }
            FamilyKind::LandauParaxial => {
                let z_m = self.geometry.z_m().expect("landau family carries a field");
                BeamParameterRates {
                    dw_dz: 0.0,
                    dinv_r_dz: 0.0,
                    dgouy_dz: (n_f + off) / z_m,
                }
            }
            FamilyKind::GeneralLg => {
                let w0 = self.geometry.w0;
                let w_m = self.geometry.w_m().expect("general family carries a field");
                let z_m = self.geometry.z_m().expect("general family carries a field");
                let b = (w_m / w0).powi(2);
                let rho = b * b;
                let u = z / z_m;
                let (sin_u, cos_u) = u.sin_cos();
                let g = cos_u * cos_u + rho * sin_u * sin_u;
                let sin_2u = (2.0 * u).sin();
                let cos_2u = (2.0 * u).cos();
                BeamParameterRates {
                    dw_dz: w0 * (rho - 1.0) * sin_2u / (2.0 * g.sqrt() * z_m),
                    dinv_r_dz: (rho - 1.0)
                        * (2.0 * cos_2u * g - (rho - 1.0) * sin_2u * sin_2u)
                        / (2.0 * z_m * z_m * g * g),
                    dgouy_dz: (n_f * b / g + off) / z_m,
                }
            }
        }
    }

    /// Beam width at `z`, nm.
    pub fn width_at(&self, z: f64) -> f64 {
        self.parameters_at(z).w
    }

    /// Largest width the beam attains for `|z| <= z_abs_max`.
    pub fn max_width(&self, z_abs_max: f64) -> f64 {
        match self.kind {
            FamilyKind::FreeLg => self.width_at(z_abs_max),
            FamilyKind::LandauParaxial => self.geometry.w_m().expect("field present"),
            FamilyKind::GeneralLg => {
                let w_m = self.geometry.w_m().expect("field present");
                let quarter = 0.5 * std::f64::consts::PI
                    * self.geometry.z_m().expect("field present");
                if z_abs_max >= quarter {
                    self.geometry.w0.max(w_m * w_m / self.geometry.w0)
                } else {
                    self.geometry.w0.max(self.width_at(z_abs_max))
                }
            }
        }
    }

    /// Sample the normalized radial profile on `grid` at axial position `z`.
    ///
    /// Fails if the grid does not extend to at least eight beam widths
    /// (coverage) or if the sampled norm deviates from unity by more than
    /// one part in a thousand (resolution); otherwise the tiny residual
    /// discretization error is removed by renormalizing.
    pub fn sample(&self, z: f64, grid: &RadialGrid) -> Result<RadialWavefunction> {
        let (mut state, _) = self.sample_with_rates(z, grid, false)?;
        state.values.shrink_to_fit();
        Ok(state)
    }

    /// Sample the profile together with its axial derivative
    /// `d psi / d z` on the same grid, both scaled by the same
    /// renormalization factor so that linear identities between them are
    /// preserved exactly.
    pub fn sample_with_derivative(
        &self,
        z: f64,
        grid: &RadialGrid,
    ) -> Result<(RadialWavefunction, Vec<Complex64>)> {
        let (state, rates) = self.sample_with_rates(z, grid, true)?;
        Ok((state, rates.expect("requested derivative")))
    }

    fn sample_with_rates(
        &self,
        z: f64,
        grid: &RadialGrid,
        with_derivative: bool,
    ) -> Result<(RadialWavefunction, Option<Vec<Complex64>>)> {
        let p = self.parameters_at(z);
        let needed = 8.0 * p.w;
        if grid.r_max() < needed {
            return Err(Error::GridCoverage {
                r_max: grid.r_max(),
                width: p.w,
                needed,
            });
        }
        let (state, deriv) = self.sample_unchecked(&p, grid, with_derivative);
        let n2 = state.norm_squared();
        if (n2 - 1.0).abs() > 1e-3 {
            return Err(Error::NotNormalized(n2));
        }
        let mut state = state;
        let factor = state.normalize();
        let deriv = deriv.map(|mut d| {
            for v in &mut d {
                *v *= factor;
            }
            d
        });
        Ok((state, deriv))
    }

    /// Sample with the width artificially multiplied by `width_scale`
    /// while keeping the curvature and longitudinal phase of the true
    /// beam. With `width_scale = 1` this is the exact beam; any other
    /// value produces a deliberately inconsistent state for sensitivity
    /// probes of residual-based checks. The profile is self-similar, so
    /// it stays normalized.
    pub fn sample_scaled_width(
        &self,
        z: f64,
        grid: &RadialGrid,
        width_scale: f64,
    ) -> Result<RadialWavefunction> {
        let mut p = self.parameters_at(z);
        p.w *= width_scale;
        let needed = 8.0 * p.w;
        if grid.r_max() < needed {
            return Err(Error::GridCoverage {
                r_max: grid.r_max(),
                width: p.w,
                needed,
            });
        }
        let (mut state, _) = self.sample_unchecked(&p, grid, false);
        let n2 = state.norm_squared();
        if (n2 - 1.0).abs() > 1e-3 {
            return Err(Error::NotNormalized(n2));
        }
        state.normalize();
        Ok(state)
    }

    fn sample_unchecked(
        &self,
        p: &BeamParameters,
        grid: &RadialGrid,
        with_derivative: bool,
    ) -> (RadialWavefunction, Option<Vec<Complex64>>) {
        let n = self.qn.n;
        let alpha = self.qn.ell.unsigned_abs();
        let a_f = alpha as f64;
        let k = self.geometry.k;
        let c_norm = norm_constant(n, self.qn.ell);
        let rates = if with_derivative {
            Some(self.parameter_rates(p.z))
        } else {
            None
        };
        let mut values = Vec::with_capacity(grid.len());
        let mut derivs = if with_derivative {
            Some(Vec::with_capacity(grid.len()))
        } else {
            None
        };
        for &r in grid.points() {
            let zeta = 2.0 * r * r / (p.w * p.w);
            // Fold the (sqrt(2) r / w)^alpha e^{-zeta/2} prefactor into the
            // Laguerre recurrence seed so large zeta cannot overflow.
            let ln_pre = if alpha == 0 {
                -0.5 * zeta
            } else {
                a_f * (std::f64::consts::SQRT_2 * r / p.w).ln() - 0.5 * zeta
            };
            let pre = ln_pre.exp();
            let lag = scaled_value(n, alpha, zeta, pre);
            let amp = c_norm / p.w * lag;
            let theta = 0.5 * k * r * r * p.inv_r - p.gouy;
            let phase = Complex64::from_polar(1.0, theta);
            values.push(amp * phase);
            if let (Some(d), Some(rt)) = (derivs.as_mut(), rates.as_ref()) {
                // dA/dz = (dw/dz / w) (C/w) pre [ (zeta - alpha - 1) L_n
                //         - 2 zeta L_n' ] with L_n' = -L_{n-1}^{alpha+1}.
                let lp = if n == 0 {
                    0.0
                } else {
                    -scaled_value(n - 1, alpha + 1, zeta, pre)
                };
                let damp = rt.dw_dz / p.w
                    * (c_norm / p.w)
                    * ((zeta - a_f - 1.0) * lag - 2.0 * zeta * lp);
                let dtheta = 0.5 * k * r * r * rt.dinv_r_dz - rt.dgouy_dz;
                d.push((Complex64::new(damp, 0.0)
                    + Complex64::new(0.0, dtheta) * amp)
                    * phase);
            }
        }
        (
            RadialWavefunction {
                ell: self.qn.ell,
                z: p.z,
                grid: grid.clone(),
                values,
            },
            derivs,
        )
    }

    /// Serializable sidecar describing a sampled profile.
    pub fn sidecar(&self, z: f64) -> WavefunctionSidecar {
        let p = self.parameters_at(z);
        WavefunctionSidecar {
            family: self.kind.name(),
            n: self.qn.n,
            ell: self.qn.ell,
            s_z: self.qn.spin.label(),
            z_nm: z,
            w_nm: p.w,
            inv_r_per_nm: p.inv_r,
            gouy_rad: p.gouy,
            units: UnitConventions::default(),
        }
    }
}

/// Metadata accompanying a CSV profile dump.
#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionSidecar {
    pub family: &'static str,
    pub n: u32,
    pub ell: i32,
    pub s_z: &'static str,
    pub z_nm: f64,
    pub w_nm: f64,
    pub inv_r_per_nm: f64,
    pub gouy_rad: f64,
    pub units: UnitConventions,
}

/// Residuals of the three parameter ODEs, maximized over the probed `z`
/// values, each normalized to be dimensionless.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OdeResidualReport {
    /// `| 1/R - w'/w | z_r`
    pub width_curvature: f64,
    /// `| k^2/R^2 + k^2 (1/R)' - 4/w^4 + 4/w_m^4 | w0^4 / 4`
    pub curvature_evolution: f64,
    /// `| 2 k Phi_G' - 4(ell + 2 s_z)/w_m^2 - 4 N / w^2 | w0^2 / (4 N)`
    pub gouy_rate: f64,
}

/// Verify by central finite differences (step `z_m * 1e-6`) that the
/// general-family parameter functions satisfy their defining ODE system:
///
/// 1. `1/R = w'/w`
/// 2. `k^2/R^2 + k^2 (1/R)' = 4/w^4 - 4/w_m^4`
/// 3. `2 k Phi_G' = 4 (ell + 2 s_z)/w_m^2 + 4 N/w^2`
///
/// Returns the worst dimensionless residual of each relation over
/// `z_samples`.
pub fn check_parameter_odes(family: &BeamFamily, z_samples: &[f64]) -> Result<OdeResidualReport> {
    if family.kind != FamilyKind::GeneralLg {
        return Err(Error::WrongFamily {
            expected: FamilyKind::GeneralLg.name(),
            got: family.kind.name(),
        });
    }
    let geom = &family.geometry;
    let k = geom.k;
    let w0 = geom.w0;
    let w_m = geom.w_m()?;
    let z_m = geom.z_m()?;
    let h = z_m * 1e-6;
    let n_f = family.qn.principal() as f64;
    let off = family.qn.gouy_offset() as f64;
    let mut worst = OdeResidualReport {
        width_curvature: 0.0,
        curvature_evolution: 0.0,
        gouy_rate: 0.0,
    };
    for &z in z_samples {
        let c = family.parameters_at(z);
        let p = family.parameters_at(z + h);
        let m = family.parameters_at(z - h);
        let dw = (p.w - m.w) / (2.0 * h);
        let dinv_r = (p.inv_r - m.inv_r) / (2.0 * h);
        let dgouy = (p.gouy - m.gouy) / (2.0 * h);

        let r1 = (c.inv_r - dw / c.w).abs() * geom.z_r;
        let r2 = (k * k * c.inv_r * c.inv_r + k * k * dinv_r - 4.0 / c.w.powi(4)
            + 4.0 / w_m.powi(4))
        .abs()
            * w0.powi(4)
            / 4.0;
        let r3 = (2.0 * k * dgouy - 4.0 * off / (w_m * w_m) - 4.0 * n_f / (c.w * c.w))
            .abs()
            * w0
            * w0
            / (4.0 * n_f);
        worst.width_curvature = worst.width_curvature.max(r1);
        worst.curvature_evolution = worst.curvature_evolution.max(r2);
        worst.gouy_rate = worst.gouy_rate.max(r3);
    }
    Ok(worst)
}
