//! Expectation values and quantization formulas for the beam families.
//!
//! Everything here is computable along two independent routes wherever
//! possible — a closed form in the beam parameters and a quadrature over a
//! sampled wavefunction — so the two can cross-validate each other:
//!
//! * mean squared radius `<r^2> = w(z)^2 N / 2` and its longitudinal
//!   average over one breathing period;
//! * electric quadrupole moment `Q0 = |e| w^2 N / 2`;
//! * the transverse-energy rate `Lambda = -<dPhi/dz>` with its
//!   family-specific closed forms, the quantized mean axial velocity
//!   `<v_z> = ck/sqrt(k^2+K^2) (1 - Lambda/k)` and effective mass
//!   `m_eff = sqrt(m^2 + 2k Lambda)`, and the spacings of both between
//!   neighboring principal quantum numbers;
//! * the centroid rotation period `pi z_m` and the independently computed
//!   helix pitch `2 pi P / (omega_c E)` with the relativistic cyclotron
//!   frequency `omega_c = |e| B c^2 / E`;
//! * the kinetic orbital angular momentum
//!   `ell + |e| B <r^2> / (2 hbar)` in units of `hbar`.

use serde::Serialize;

use crate::beams::{BeamFamily, FamilyKind};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::quadrature::gauss_legendre_on;
use crate::units::{hbar_c_ev_nm, BeamGeometry, CONSTANTS, NM_PER_M};
use crate::wavefunction::RadialWavefunction;

/// Tolerance on `|norm^2 - 1|` for quadrature-route observables.
const NORM_TOLERANCE: f64 = 1e-8;

/// Closed-form mean squared radius `w(z)^2 N / 2`, in nm^2.
pub fn r2_mean_closed(family: &BeamFamily, z: f64) -> f64 {
    let w = family.width_at(z);
    0.5 * w * w * family.qn.principal() as f64
}

/// Quadrature-route mean squared radius, in nm^2. The state must be
/// normalized to within one part in 1e8.
pub fn r2_mean_quadrature(state: &RadialWavefunction) -> Result<f64> {
    let n2 = state.norm_squared();
    if (n2 - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(n2));
    }
    Ok(state.r2_mean())
}

/// Closed-form longitudinal average of `w^2(z)` over one period,
/// `(w0^2 / 2)(1 + w_m^4 / w0^4)`, in nm^2. Requires a field.
pub fn longitudinal_average_w2(geometry: &BeamGeometry) -> Result<f64> {
    let w_m = geometry.w_m()?;
    let w0 = geometry.w0;
    let rho = (w_m / w0).powi(4);
    Ok(0.5 * w0 * w0 * (1.0 + rho))
}

/// Numerical longitudinal average of `w^2(z)` over one period `pi z_m`,
/// by Gauss-Legendre quadrature of the family's width function, in nm^2.
pub fn longitudinal_average_w2_numeric(family: &BeamFamily) -> Result<f64> {
    let z_m = family.geometry.z_m()?;
    let period = std::f64::consts::PI * z_m;
    let rule = gauss_legendre_on(0.0, period, 128);
    let integral = rule.integrate(|z| {
        let w = family.width_at(z);
        w * w
    });
    Ok(integral / period)
}

/// Electric quadrupole moment at the injection plane,
/// `Q0 = |e| w(0)^2 N / 2`, in C m^2.
pub fn quadrupole_c_m2(family: &BeamFamily) -> f64 {
    let w_m2 = (family.width_at(0.0) / NM_PER_M).powi(2);
    CONSTANTS.elementary_charge_c * w_m2 * family.qn.principal() as f64 / 2.0
}

fn lambda_branch(
    kind: FamilyKind,
    k: f64,
    w0: f64,
    w_m: Option<f64>,
    n_principal: f64,
    offset: f64,
) -> f64 {
    match (kind, w_m) {
        (FamilyKind::FreeLg, _) | (FamilyKind::GeneralLg, None) => {
            n_principal / (k * w0 * w0)
        }
        (FamilyKind::LandauParaxial, Some(w_m)) => {
            2.0 * (n_principal + offset) / (k * w_m * w_m)
        }
        (FamilyKind::GeneralLg, Some(w_m)) => {
            n_principal / k * (1.0 / (w0 * w0) + w0 * w0 / w_m.powi(4))
                + 2.0 * offset / (k * w_m * w_m)
        }
        (FamilyKind::LandauParaxial, None) => {
            unreachable!("landau family always carries a field")
        }
    }
}

/// Transverse-energy rate `Lambda = -<dPhi/dz>` for the family's own
/// branch, in 1/nm.
pub fn lambda_per_nm(family: &BeamFamily) -> f64 {
    lambda_branch(
        family.kind,
        family.geometry.k,
        family.geometry.w0,
        family.geometry.w_m().ok(),
        family.qn.principal() as f64,
        family.qn.gouy_offset() as f64,
    )
}

/// Free-space comparison value `N / (k w^2)`, in 1/nm; the reference width
/// is the injected waist, or the magnetic waist for a Landau beam (which
/// has no other width).
pub fn lambda_free_per_nm(family: &BeamFamily) -> f64 {
    let w = match family.kind {
        FamilyKind::LandauParaxial => family.geometry.w_m().expect("field present"),
        _ => family.geometry.w0,
    };
    family.qn.principal() as f64 / (family.geometry.k * w * w)
}

/// Landau-beam value `2 (N + ell + 2 s_z) / (k w_m^2)`, in 1/nm.
/// Requires a field.
pub fn lambda_landau_per_nm(family: &BeamFamily) -> Result<f64> {
    let w_m = family.geometry.w_m()?;
    Ok(lambda_branch(
        FamilyKind::LandauParaxial,
        family.geometry.k,
        family.geometry.w0,
        Some(w_m),
        family.qn.principal() as f64,
        family.qn.gouy_offset() as f64,
    ))
}

/// Effective mass `sqrt((mc^2)^2 + 2 (hbar c k)(hbar c Lambda))` in eV.
fn effective_mass_ev(k: f64, lambda: f64) -> f64 {
    let hbc = hbar_c_ev_nm();
    let mc2 = CONSTANTS.electron_rest_energy_ev;
    (mc2 * mc2 + 2.0 * (hbc * k) * (hbc * lambda)).sqrt()
}

/// Mean axial velocity (m/s) and effective mass (eV/c^2) of the beam.
///
/// Errors if `Lambda/k >= 0.1`, where the paraxial expansion behind both
/// formulas has lost its meaning.
pub fn velocity_and_mass(family: &BeamFamily) -> Result<(f64, f64)> {
    let lambda = lambda_per_nm(family);
    let k = family.geometry.k;
    if lambda / k >= 0.1 {
        return Err(Error::ParaxialityViolation(lambda / k));
    }
    let kk = family.geometry.compton_k;
    let vz = CONSTANTS.c_m_per_s * k / (k * k + kk * kk).sqrt() * (1.0 - lambda / k);
    Ok((vz, effective_mass_ev(k, lambda)))
}

/// Spacing of the quantized mean axial velocity between neighboring
/// principal quantum numbers, `c Lambda / (N sqrt(k^2 + K^2))`, in m/s.
///
/// For the general family this is identically
/// `c / (k sqrt(k^2+K^2) w0^2) [1 + w0^4/w_m^4 + 2(ell+2s_z) w0^2/(N w_m^2)]`,
/// and it reduces to `c / (k sqrt(k^2+K^2) w0^2)` in free space.
pub fn velocity_spacing_m_per_s(family: &BeamFamily) -> f64 {
    let lambda = lambda_per_nm(family);
    let k = family.geometry.k;
    let kk = family.geometry.compton_k;
    CONSTANTS.c_m_per_s * lambda / (family.qn.principal() as f64 * (k * k + kk * kk).sqrt())
}

/// Effective-mass spacing between neighboring principal quantum numbers.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MassSpacing {
    /// The leading-order value `(hbar c)^2 / (m c^2 w^2)` with `w = w0`
    /// for free/general beams and `w = w_m` for Landau beams, in eV/c^2.
    pub approx_ev: f64,
    /// The exact difference `m_eff(N+1) - m_eff(N)` for the family's own
    /// `Lambda(N)`, in eV/c^2.
    pub exact_ev: f64,
}

/// Both the leading-order and the exact effective-mass spacing.
pub fn mass_spacing(family: &BeamFamily) -> MassSpacing {
    let hbc = hbar_c_ev_nm();
    let mc2 = CONSTANTS.electron_rest_energy_ev;
    let w_ref = match family.kind {
        FamilyKind::LandauParaxial => family.geometry.w_m().expect("field present"),
        _ => family.geometry.w0,
    };
    let approx_ev = hbc * hbc / (mc2 * w_ref * w_ref);
    let k = family.geometry.k;
    let n_f = family.qn.principal() as f64;
    let off = family.qn.gouy_offset() as f64;
    let w_m = family.geometry.w_m().ok();
    let lambda_n = lambda_branch(family.kind, k, family.geometry.w0, w_m, n_f, off);
    let lambda_n1 = lambda_branch(family.kind, k, family.geometry.w0, w_m, n_f + 1.0, off);
    let exact_ev = effective_mass_ev(k, lambda_n1) - effective_mass_ev(k, lambda_n);
    MassSpacing { approx_ev, exact_ev }
}

/// Relativistic cyclotron frequency `|e| B c^2 / E`, rad/s. Requires a
/// field.
pub fn omega_c_rad_per_s(geometry: &BeamGeometry) -> Result<f64> {
    let b = geometry.b_tesla();
    if b == 0.0 {
        return Err(Error::FreeSpace);
    }
    let e_si = geometry.energy_ev() * CONSTANTS.elementary_charge_c;
    Ok(CONSTANTS.elementary_charge_c * b * CONSTANTS.c_m_per_s.powi(2) / e_si)
}

/// The longitudinal period of the beam width, `pi z_m`, and the pitch of
/// the centroid helix, `2 pi P c^2 / (omega_c E)` — two independent
/// evaluations of the same length, both in metres.
pub fn period_and_pitch_m(geometry: &BeamGeometry) -> Result<(f64, f64)> {
    let z_m = geometry.z_m()?;
    let period = std::f64::consts::PI * z_m / NM_PER_M;
    let omega_c = omega_c_rad_per_s(geometry)?;
    let p_si = geometry.momentum_ev() * CONSTANTS.elementary_charge_c / CONSTANTS.c_m_per_s;
    let e_si = geometry.energy_ev() * CONSTANTS.elementary_charge_c;
    let pitch =
        2.0 * std::f64::consts::PI * p_si * CONSTANTS.c_m_per_s.powi(2) / (omega_c * e_si);
    Ok((period, pitch))
}

/// Kinetic orbital angular momentum from a mean squared radius (nm^2):
/// `ell + |e| B <r^2> / (2 hbar) = ell + 2 <r^2> / w_m^2` in units of
/// `hbar`; just `ell` in free space.
pub fn kinetic_oam_from_r2(ell: i32, r2_nm2: f64, geometry: &BeamGeometry) -> f64 {
    match geometry.w_m() {
        Ok(w_m) => ell as f64 + 2.0 * r2_nm2 / (w_m * w_m),
        Err(_) => ell as f64,
    }
}

/// Closed-form kinetic OAM of a beam at `z`, in units of `hbar`.
pub fn kinetic_oam_closed(family: &BeamFamily, z: f64) -> f64 {
    kinetic_oam_from_r2(family.qn.ell, r2_mean_closed(family, z), &family.geometry)
}

/// Quadrature-route kinetic OAM of a sampled state, in units of `hbar`.
pub fn kinetic_oam_quadrature(
    state: &RadialWavefunction,
    geometry: &BeamGeometry,
) -> Result<f64> {
    let r2 = r2_mean_quadrature(state)?;
    Ok(kinetic_oam_from_r2(state.ell, r2, geometry))
}

/// The density-weighted mean of the axial phase derivative,
/// `<dPhi/dz> = Im integral psi* (dpsi/dz) 2 pi r dr`, evaluated by
/// central differences of the sampled beam with step `h` (rad/nm).
/// The closed form predicts this to equal `-Lambda` independently of `z`.
pub fn phase_z_derivative_mean(
    family: &BeamFamily,
    z: f64,
    grid: &RadialGrid,
    h: f64,
) -> Result<f64> {
    let center = family.sample(z, grid)?;
    let plus = family.sample(z + h, grid)?;
    let minus = family.sample(z - h, grid)?;
    let mut acc = 0.0;
    for (((&r, &w), c), (p, m)) in grid
        .points()
        .iter()
        .zip(grid.weights())
        .zip(&center.values)
        .zip(plus.values.iter().zip(&minus.values))
    {
        let dpsi = (p - m) / (2.0 * h);
        acc += w * 2.0 * std::f64::consts::PI * r * (c.conj() * dpsi).im;
    }
    Ok(acc)
}

/// The full set of observables for one beam at one axial position, with
/// units spelled out in the field names.
#[derive(Debug, Clone, Serialize)]
pub struct ObservableSet {
    pub family: &'static str,
    pub n: u32,
    pub ell: i32,
    pub s_z: &'static str,
    pub b_tesla: f64,
    pub kinetic_kev: f64,
    pub w0_nm: f64,
    pub z_nm: f64,
    pub norm: f64,
    pub r2_mean_m2: f64,
    pub quadrupole_c_m2: f64,
    pub vz_mean_m_per_s: f64,
    pub m_eff_ev_per_c2: f64,
    pub lambda_per_m: f64,
    pub lambda_free_per_m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_landau_per_m: Option<f64>,
    pub lambda_over_lambda_free: f64,
    pub lambda_over_k: f64,
    pub kinetic_oam_hbar: f64,
    pub velocity_spacing_m_per_s: f64,
    pub mass_spacing_approx_ev_per_c2: f64,
    pub mass_spacing_exact_ev_per_c2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub helix_pitch_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c_rad_per_s: Option<f64>,
    /// True when `Lambda/k` exceeds 1e-3 and paraxial formulas should be
    /// taken with care.
    pub paraxiality_warning: bool,
}

/// Evaluate every observable of `family` at axial position `z`. The norm
/// is recomputed by quadrature on a dedicated Gauss-Legendre grid as an
/// end-to-end sanity value.
pub fn evaluate(family: &BeamFamily, z: f64) -> Result<ObservableSet> {
    let w_z = family.width_at(z);
    let grid = RadialGrid::gauss_legendre(9.0 * w_z, 512);
    let state = family.sample(z, &grid)?;
    let norm = state.norm_squared();
    let r2_nm2 = r2_mean_quadrature(&state)?;
    let lambda = lambda_per_nm(family);
    let lambda_free = lambda_free_per_nm(family);
    let (vz, m_eff) = velocity_and_mass(family)?;
    let spacing = mass_spacing(family);
    let geometry = &family.geometry;
    let (period, pitch, omega) = if geometry.is_magnetic() {
        let (p, h) = period_and_pitch_m(geometry)?;
        (Some(p), Some(h), Some(omega_c_rad_per_s(geometry)?))
    } else {
        (None, None, None)
    };
    Ok(ObservableSet {
        family: family.kind.name(),
        n: family.qn.n,
        ell: family.qn.ell,
        s_z: family.qn.spin.label(),
        b_tesla: geometry.b_tesla(),
        kinetic_kev: geometry.kinetic_ev() / 1e3,
        w0_nm: geometry.w0,
        z_nm: z,
        norm,
        r2_mean_m2: r2_nm2 / (NM_PER_M * NM_PER_M),
        quadrupole_c_m2: quadrupole_c_m2(family),
        vz_mean_m_per_s: vz,
        m_eff_ev_per_c2: m_eff,
        lambda_per_m: lambda * NM_PER_M,
        lambda_free_per_m: lambda_free * NM_PER_M,
        lambda_landau_per_m: lambda_landau_per_nm(family).ok().map(|v| v * NM_PER_M),
        lambda_over_lambda_free: lambda / lambda_free,
        lambda_over_k: lambda / geometry.k,
        kinetic_oam_hbar: kinetic_oam_from_r2(family.qn.ell, r2_nm2, geometry),
        velocity_spacing_m_per_s: velocity_spacing_m_per_s(family),
        mass_spacing_approx_ev_per_c2: spacing.approx_ev,
        mass_spacing_exact_ev_per_c2: spacing.exact_ev,
        period_m: period,
        helix_pitch_m: pitch,
        omega_c_rad_per_s: omega,
        paraxiality_warning: lambda / geometry.k >= 1e-3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{BeamQuantumNumbers, Spin};
    use crate::units::{geometry_from_lab, LabInputs};

    fn lab(b_tesla: f64, kinetic_ev: f64, w0_nm: f64) -> BeamGeometry {
        geometry_from_lab(LabInputs::new(b_tesla, kinetic_ev, w0_nm * 1e-9).unwrap())
            .unwrap()
    }

    fn qn(n: u32, ell: i32, spin: Spin) -> BeamQuantumNumbers {
        BeamQuantumNumbers { n, ell, spin }
    }

    /// Reference configuration: 200 keV, w0 = 1 nm, B = 1 T, n=1, ell=2, spin up.
    fn reference_family() -> BeamFamily {
        let geom = lab(1.0, 200_000.0, 1.0);
        BeamFamily::general_lg(qn(1, 2, Spin::Up), geom).unwrap()
    }

    #[test]
    fn lambda_ratio_golden_number() {
        let fam = reference_family();
        let ratio = lambda_per_nm(&fam) / lambda_free_per_nm(&fam);
        // 1 + w0^4/w_m^4 + 2(ell+2s_z) w0^2 / (N w_m^2) with w0/w_m =
        // 1/51.31 gives 1.000456.
        assert!((ratio - 1.0005).abs() < 1e-4, "ratio {ratio}");
        assert!((ratio - 1.000456).abs() < 2e-6, "ratio {ratio}");
    }

    #[test]
    fn velocity_spacing_golden_number() {
        let fam = reference_family();
        let dv = velocity_spacing_m_per_s(&fam);
        assert!((dv - 33.0).abs() / 33.0 < 0.03, "spacing {dv}");
        // The free-space value at the same waist: 33.21 m/s.
        let free = BeamFamily::free_lg(fam.qn, lab(0.0, 200_000.0, 1.0));
        let dv_free = velocity_spacing_m_per_s(&free);
        assert!((dv_free - 33.21).abs() < 0.02, "free spacing {dv_free}");
        // Ratio of spacings equals the Lambda ratio.
        assert!(
            (dv / dv_free - lambda_per_nm(&fam) / lambda_free_per_nm(&fam)).abs()
                < 1e-12
        );
    }

    #[test]
    fn landau_velocity_spacing_is_three_orders_smaller() {
        let geom = lab(1.0, 200_000.0, 1.0);
        let q = qn(1, 2, Spin::Up);
        let lg = BeamFamily::general_lg(q, geom).unwrap();
        let landau = BeamFamily::landau(q, geom).unwrap();
        let ratio = velocity_spacing_m_per_s(&landau) / velocity_spacing_m_per_s(&lg);
        assert!(ratio < 1e-2, "ratio {ratio}");
        assert!(ratio > 1e-4, "ratio {ratio}");
    }

    #[test]
    fn mass_spacing_ratio_golden_number() {
        let geom = lab(1.0, 200_000.0, 1.0);
        let q = qn(1, 2, Spin::Up);
        let lg = BeamFamily::general_lg(q, geom).unwrap();
        let landau = BeamFamily::landau(q, geom).unwrap();
        let ratio = mass_spacing(&landau).approx_ev / mass_spacing(&lg).approx_ev;
        let expect = (geom.w0 / geom.w_m().unwrap()).powi(2);
        assert!((ratio - expect).abs() < 1e-15);
        assert!((ratio - 3.8e-4).abs() < 0.1e-4, "ratio {ratio}");
        // For the general family the exact spacing is close to the
        // leading-order one.
        let sp = mass_spacing(&lg);
        assert!((sp.exact_ev / sp.approx_ev - 1.0).abs() < 1e-2);
    }

    #[test]
    fn lambda_consistency_ladder() {
        // General at w0 = w_m equals the Landau value exactly.
        let probe = lab(1.0, 200_000.0, 1.0);
        let w_m = probe.w_m().unwrap();
        let geom = lab(1.0, 200_000.0, w_m);
        let q = qn(2, -3, Spin::Down);
        let general = BeamFamily::general_lg(q, geom).unwrap();
        let landau = BeamFamily::landau(q, geom).unwrap();
        let a = lambda_per_nm(&general);
        let b = lambda_per_nm(&landau);
        assert!(((a - b) / b).abs() < 1e-14);
        // Free-space beam reproduces the free formula exactly.
        let free_geom = lab(0.0, 200_000.0, 1.0);
        let free = BeamFamily::free_lg(q, free_geom);
        let c = lambda_per_nm(&free);
        assert!(((c - lambda_free_per_nm(&free)) / c).abs() < 1e-14);
    }

    #[test]
    fn effective_mass_identity() {
        // m_eff^2 = (mc^2)^2 + 2 (hbar c)^2 k Lambda, compared without
        // subtracting the nearly equal squares (which would lose ~8 digits
        // to cancellation).
        let fam = reference_family();
        let (_, m_eff) = velocity_and_mass(&fam).unwrap();
        let mc2 = CONSTANTS.electron_rest_energy_ev;
        let hbc = hbar_c_ev_nm();
        let rhs = mc2 * mc2 + 2.0 * hbc * hbc * fam.geometry.k * lambda_per_nm(&fam);
        assert!(((m_eff * m_eff - rhs) / rhs).abs() < 1e-15);
        // No coupling: zero rotation energy collapses to the rest mass.
        assert_eq!(effective_mass_ev(fam.geometry.k, 0.0), mc2);
        // Sensitivity check away from the singular subtraction:
        // d m_eff / d Lambda = (hbar c)^2 k / m_eff.
        let lam = 1e-3;
        let h = 1e-5;
        let m0 = effective_mass_ev(fam.geometry.k, lam);
        let fd = (effective_mass_ev(fam.geometry.k, lam + h)
            - effective_mass_ev(fam.geometry.k, lam - h))
            / (2.0 * h);
        let analytic = hbc * hbc * fam.geometry.k / m0;
        assert!(((fd - analytic) / analytic).abs() < 1e-6);
    }

    #[test]
    fn paraxiality_violation_is_caught() {
        let geom = lab(1.0, 1_000.0, 1e-3);
        let fam = BeamFamily::general_lg(qn(1, 2, Spin::Up), geom).unwrap();
        assert!(matches!(
            velocity_and_mass(&fam),
            Err(Error::ParaxialityViolation(_))
        ));
    }

    #[test]
    fn longitudinal_average_closed_vs_numeric() {
        for &w0_over_wm in &[0.5, 1.0, 2.0] {
            let probe = lab(1.0, 200_000.0, 1.0);
            let w_m = probe.w_m().unwrap();
            let geom = lab(1.0, 200_000.0, w0_over_wm * w_m);
            let fam = BeamFamily::general_lg(qn(0, 1, Spin::Up), geom).unwrap();
            let closed = longitudinal_average_w2(&geom).unwrap();
            let numeric = longitudinal_average_w2_numeric(&fam).unwrap();
            assert!(
                ((closed - numeric) / closed).abs() < 1e-10,
                "w0/wm={w0_over_wm}: {closed} vs {numeric}"
            );
            if w0_over_wm == 0.5 {
                // (w0^2/2)(1 + 16) = 17/8 w_m^2.
                assert!((closed - 2.125 * w_m * w_m).abs() < 1e-9 * closed);
            }
            if w0_over_wm == 1.0 {
                assert!((closed - w_m * w_m).abs() < 1e-9 * closed);
            }
        }
        // Symmetric under w0/w_m -> w_m/w0.
        let probe = lab(1.0, 200_000.0, 1.0);
        let w_m = probe.w_m().unwrap();
        let half = longitudinal_average_w2(&lab(1.0, 200_000.0, 0.5 * w_m)).unwrap();
        let twice = longitudinal_average_w2(&lab(1.0, 200_000.0, 2.0 * w_m)).unwrap();
        assert!(((half - twice) / half).abs() < 1e-12);
    }

    #[test]
    fn quadrupole_reference_values() {
        let geom = lab(0.0, 200_000.0, 1.0);
        let e = CONSTANTS.elementary_charge_c;
        let w0_m2 = 1e-18;
        let f00 = BeamFamily::free_lg(qn(0, 0, Spin::Up), geom);
        assert!((quadrupole_c_m2(&f00) - e * w0_m2 / 2.0).abs() < 1e-40);
        let f12 = BeamFamily::free_lg(qn(1, 2, Spin::Up), geom);
        assert!((quadrupole_c_m2(&f12) - 2.5 * e * w0_m2).abs() < 1e-40);
        let f1m2 = BeamFamily::free_lg(qn(1, -2, Spin::Up), geom);
        assert_eq!(quadrupole_c_m2(&f12), quadrupole_c_m2(&f1m2));
    }

    #[test]
    fn period_equals_pitch_over_random_configurations() {
        // Deterministic pseudo-random (B, T) pairs from a small LCG.
        let mut seed: u64 = 0x5DEECE66D;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10 {
            let b = 0.05 + 4.95 * next();
            let t_ev = 1_000.0 + 999_000.0 * next();
            let geom = lab(b, t_ev, 1.0);
            let (period, pitch) = period_and_pitch_m(&geom).unwrap();
            assert!(
                ((period - pitch) / period).abs() < 1e-10,
                "B={b} T={t_ev}: {period} vs {pitch}"
            );
        }
        // Doubling B halves the period.
        let p1 = period_and_pitch_m(&lab(1.0, 200_000.0, 1.0)).unwrap().0;
        let p2 = period_and_pitch_m(&lab(2.0, 200_000.0, 1.0)).unwrap().0;
        assert!((p1 / p2 - 2.0).abs() < 1e-12);
        // Free space is rejected.
        assert!(period_and_pitch_m(&lab(0.0, 200_000.0, 1.0)).is_err());
    }

    #[test]
    fn kinetic_oam_reference_values() {
        // Ground Landau mode: 0 + |e| B (w_m^2/2) / (2 hbar) = 1.
        let geom = lab(1.0, 200_000.0, 1.0);
        let landau = BeamFamily::landau(qn(0, 0, Spin::Up), geom).unwrap();
        let v = kinetic_oam_closed(&landau, 0.0);
        assert!((v - 1.0).abs() < 1e-12, "ground Landau OAM {v}");
        // Free space returns ell exactly.
        let free = BeamFamily::free_lg(qn(0, -3, Spin::Up), lab(0.0, 200_000.0, 1.0));
        assert_eq!(kinetic_oam_closed(&free, 123.0), -3.0);
    }

    #[test]
    fn r2_closed_vs_quadrature() {
        let geom = lab(1.0, 200_000.0, 30.0);
        let fam = BeamFamily::general_lg(qn(2, -3, Spin::Down), geom).unwrap();
        let z = 0.4 * geom.z_m().unwrap();
        let grid = RadialGrid::gauss_legendre(9.0 * fam.width_at(z), 400);
        let st = fam.sample(z, &grid).unwrap();
        let a = r2_mean_closed(&fam, z);
        let b = r2_mean_quadrature(&st).unwrap();
        assert!(((a - b) / a).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn phase_derivative_average_equals_minus_lambda() {
        let geom = lab(1.0, 200_000.0, 30.0);
        let fam = BeamFamily::general_lg(qn(1, 2, Spin::Up), geom).unwrap();
        let z_m = geom.z_m().unwrap();
        let lambda = lambda_per_nm(&fam);
        let grid = RadialGrid::gauss_legendre(9.0 * fam.max_width(2.0 * z_m), 400);
        for &z in &[0.0, 0.31 * z_m, 1.12 * z_m] {
            let mean = phase_z_derivative_mean(&fam, z, &grid, z_m * 1e-5).unwrap();
            assert!(
                ((mean + lambda) / lambda).abs() < 1e-6,
                "z={z}: <dPhi/dz>={mean} vs -Lambda={}",
                -lambda
            );
        }
    }

    #[test]
    fn observable_set_is_complete_and_sane() {
        let fam = reference_family();
        let set = evaluate(&fam, 0.0).unwrap();
        assert!((set.norm - 1.0).abs() < 1e-8);
        assert!(set.r2_mean_m2 > 0.0);
        assert!(set.m_eff_ev_per_c2 >= CONSTANTS.electron_rest_energy_ev);
        assert!(set.period_m.is_some());
        assert!((set.lambda_over_lambda_free - 1.000456).abs() < 2e-6);
        assert!(!set.paraxiality_warning);
        let json = serde_json::to_string(&set).unwrap();
        assert!(json.contains("\"vz_mean_m_per_s\""));
        // Free-space set omits the magnetic-only entries.
        let free = BeamFamily::free_lg(fam.qn, lab(0.0, 200_000.0, 1.0));
        let fset = evaluate(&free, 0.0).unwrap();
        assert!(fset.period_m.is_none());
        let fjson = serde_json::to_string(&fset).unwrap();
        assert!(!fjson.contains("period_m"));
    }
}
