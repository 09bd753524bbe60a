//! Cross-route consistency checks: closed-form moments against grid
//! quadrature, the basis-decomposition path against both the closed form
//! and the PDE integrator, phase-derivative routes for the rotation
//! energy, limit reductions, and the opposite-OAM asymmetry sweep.

use maglg::beams::{BeamFamily, BeamQuantumNumbers, FamilyKind, Spin};
use maglg::grid::RadialGrid;
use maglg::modes::{decompose, penetration_experiment, penetration_pair};
use maglg::observables::{
    lambda_per_nm, phase_z_derivative_mean, r2_mean_closed, r2_mean_quadrature,
};
use maglg::propagator::{propagate, PropagatorConfig};
use maglg::units::{geometry_from_lab, BeamGeometry, LabInputs};

/// Deterministic linear-congruential stream in [0, 1).
struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn reference_wm() -> f64 {
    geometry_from_lab(LabInputs::new(1.0, 200_000.0, 1e-9).unwrap())
        .unwrap()
        .w_m()
        .unwrap()
}

fn magnetic_geometry(w0_over_wm: f64) -> BeamGeometry {
    let w_m = reference_wm();
    geometry_from_lab(LabInputs::new(1.0, 200_000.0, w0_over_wm * w_m * 1e-9).unwrap())
        .unwrap()
}

#[test]
fn closed_form_r2_matches_quadrature_for_random_states() {
    let mut rng = Lcg(0x5deece66d);
    let w_m = reference_wm();
    for trial in 0..20 {
        let kind = match trial % 3 {
            0 => FamilyKind::GeneralLg,
            1 => FamilyKind::FreeLg,
            _ => FamilyKind::LandauParaxial,
        };
        let w0_over_wm = 0.3 + 1.7 * rng.next_f64();
        let b_tesla = if kind == FamilyKind::FreeLg { 0.0 } else { 1.0 };
        let geom = geometry_from_lab(
            LabInputs::new(b_tesla, 200_000.0, w0_over_wm * w_m * 1e-9).unwrap(),
        )
        .unwrap();
        let q = BeamQuantumNumbers {
            n: (rng.next_f64() * 5.0) as u32,
            ell: ((rng.next_f64() * 11.0) as i32) - 5,
            spin: if rng.next_f64() < 0.5 {
                Spin::Up
            } else {
                Spin::Down
            },
        };
        let fam = BeamFamily::new(kind, q, geom).unwrap();
        let z = rng.next_f64() * std::f64::consts::PI * geom.axial_scale();
        let closed = r2_mean_closed(&fam, z);
        let grid = RadialGrid::gauss_legendre(10.0 * fam.width_at(z), 768);
        let state = fam.sample(z, &grid).unwrap();
        let numeric = r2_mean_quadrature(&state).unwrap();
        let rel = ((closed - numeric) / closed).abs();
        assert!(
            rel < 1e-8,
            "trial {trial} ({kind:?} n={} ell={}): rel {rel}",
            q.n,
            q.ell
        );
    }
}

#[test]
fn width_is_periodic_and_pitch_matches_the_cyclotron_route() {
    // Width periodicity over the magnetic period, at random z.
    let mut rng = Lcg(17);
    let geom = magnetic_geometry(0.5);
    let z_m = geom.z_m().unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    let fam = BeamFamily::general_lg(q, geom).unwrap();
    let period = std::f64::consts::PI * z_m;
    for _ in 0..25 {
        let z = (rng.next_f64() * 4.0 - 2.0) * period;
        let a = fam.width_at(z);
        let b = fam.width_at(z + period);
        assert!(
            ((a - b) / a).abs() < 1e-12,
            "width not periodic at z={z}: {a} vs {b}"
        );
    }
}

#[test]
fn rotation_energy_equals_minus_mean_phase_rate_everywhere() {
    let w_m = reference_wm();
    for &(kind, w0_over_wm, b) in &[
        (FamilyKind::GeneralLg, 0.5, 1.0),
        (FamilyKind::LandauParaxial, 1.0, 1.0),
        (FamilyKind::FreeLg, 0.7, 0.0),
    ] {
        let geom = geometry_from_lab(
            LabInputs::new(b, 200_000.0, w0_over_wm * w_m * 1e-9).unwrap(),
        )
        .unwrap();
        let q = BeamQuantumNumbers {
            n: 1,
            ell: 2,
            spin: Spin::Up,
        };
        let fam = BeamFamily::new(kind, q, geom).unwrap();
        let lambda = lambda_per_nm(&fam);
        let scale = geom.axial_scale();
        for &f in &[0.0, 0.11, 0.25, 0.52, 0.97] {
            let z = f * scale;
            let grid = RadialGrid::gauss_legendre(10.0 * fam.max_width(z.abs()), 512);
            let mean_rate = phase_z_derivative_mean(&fam, z, &grid, scale * 1e-6).unwrap();
            let rel = ((mean_rate + lambda) / lambda).abs();
            assert!(
                rel < 1e-6,
                "{kind:?} at z={z}: <dPhi/dz>={mean_rate}, Lambda={lambda}, rel {rel}"
            );
        }
    }
}

#[test]
fn tight_waist_limit_reduces_to_the_free_beam() {
    // w_m / w0 = 1000: within the Rayleigh range the in-field parameters
    // must collapse onto the free-space ones.
    let w_m = reference_wm();
    let geom = geometry_from_lab(
        LabInputs::new(1.0, 200_000.0, 1e-3 * w_m * 1e-9).unwrap(),
    )
    .unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    let general = BeamFamily::general_lg(q, geom).unwrap();
    let free = BeamFamily::free_lg(q, geom);
    for &f in &[-1.0, -0.4, 0.0, 0.3, 1.0] {
        let z = f * geom.z_r;
        let a = general.parameters_at(z);
        let b = free.parameters_at(z);
        assert!(((a.w - b.w) / b.w).abs() < 1e-4, "width at {f} z_R");
        let curv_scale = 1.0 / geom.z_r;
        assert!(
            (a.inv_r - b.inv_r).abs() / curv_scale < 1e-4,
            "curvature at {f} z_R"
        );
        let gouy_scale = q.principal() as f64;
        assert!(
            (a.gouy - b.gouy).abs() / gouy_scale < 1e-4,
            "gouy at {f} z_R: {} vs {}",
            a.gouy,
            b.gouy
        );
    }
}

#[test]
fn matched_waist_general_family_is_exactly_stationary() {
    let geom = magnetic_geometry(1.0);
    let z_m = geom.z_m().unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    let general = BeamFamily::general_lg(q, geom).unwrap();
    let gouy_rate = (q.principal() + q.gouy_offset()) as f64 / z_m;
    for &f in &[0.0, 0.37, 1.0, 2.4] {
        let z = f * z_m;
        let p = general.parameters_at(z);
        assert!(((p.w - geom.w0) / geom.w0).abs() < 1e-12, "width at {f}");
        assert!((p.inv_r * z_m).abs() < 1e-12, "curvature at {f}");
        assert!(
            (p.gouy - gouy_rate * z).abs() <= 1e-12 * gouy_rate * z_m * 2.5,
            "gouy at {f}: {} vs {}",
            p.gouy,
            gouy_rate * z
        );
    }
}

#[test]
fn basis_path_reproduces_the_closed_form_at_quarter_and_full_period() {
    let geom = magnetic_geometry(0.5);
    let z_m = geom.z_m().unwrap();
    let w_m = geom.w_m().unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    // A grid wide enough for the n <= 64 basis ladder.
    let grid = RadialGrid::gauss_legendre(13.0 * w_m, 1024);
    let injected = BeamFamily::free_lg(q, geom).sample(0.0, &grid).unwrap();
    let (basis, coeffs) = decompose(&injected, &geom, 64).unwrap();
    assert!(coeffs.completeness >= 0.999);
    let closed = BeamFamily::general_lg(q, geom).unwrap();
    for &z in &[
        0.25 * std::f64::consts::PI * z_m,
        std::f64::consts::PI * z_m,
    ] {
        let via_basis = basis.synthesize(&coeffs, z, q.spin).unwrap();
        let reference = closed.sample(z, &grid).unwrap();
        let err = via_basis.l2_distance(&reference);
        eprintln!("basis vs closed at z/zm={:.3}: L2 {err:.3e}", z / z_m);
        assert!(err < 1e-5, "basis-path L2 error {err} at z={z}");
    }
}

#[test]
fn basis_path_and_pde_integrator_agree_away_from_special_points() {
    // Two fully independent evolution routes from the same initial
    // profile: diagonal phases over the discrete basis vs Crank-Nicolson
    // integration. Their mutual distance is bounded by the integrator's
    // own accuracy.
    let geom = magnetic_geometry(0.5);
    let z_m = geom.z_m().unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    let fam = BeamFamily::general_lg(q, geom).unwrap();
    let z_target = 0.4 * z_m;
    let cfg = PropagatorConfig::default_for(&fam, z_target).unwrap();
    let grid = cfg.grid.clone();
    let initial = fam.sample(0.0, &grid).unwrap();
    let (basis, coeffs) = decompose(&initial, &geom, 32).unwrap();
    let via_basis = basis.synthesize(&coeffs, z_target, q.spin).unwrap();
    let via_pde = propagate(&initial, &geom, q, z_target, &cfg).unwrap();
    let err = via_pde.l2_distance(&via_basis);
    eprintln!("pde vs basis at z/zm=0.4: L2 {err:.3e}");
    assert!(err < 1e-4, "independent routes diverge: {err}");
}

#[test]
fn injected_beams_follow_the_breathing_width_law() {
    // For a pure free-beam waist profile, <r^2>(z) from the decomposition
    // route must match the closed-form width law w(z)^2 N / 2.
    let w_m = reference_wm();
    for &(w0_over_wm, n, ell) in &[(0.25, 0u32, 1i32), (0.5, 2, 2), (2.0, 1, 3)] {
        let geom = magnetic_geometry(w0_over_wm);
        let z_m = geom.z_m().unwrap();
        let report = penetration_experiment(ell, n, Spin::Up, &geom).unwrap();
        let q = BeamQuantumNumbers {
            n,
            ell,
            spin: Spin::Up,
        };
        let fam = BeamFamily::general_lg(q, geom).unwrap();
        let n_f = q.principal() as f64;
        for row in report.r2_table.iter().step_by(8) {
            let w = fam.width_at(row.z_over_zm * z_m);
            let expect = 0.5 * w * w * n_f / (w_m * w_m);
            let rel = ((row.r2_over_wm2 - expect) / expect).abs();
            assert!(
                rel < 1e-6,
                "w0/wm={w0_over_wm} n={n} ell={ell} z/zm={}: rel {rel}",
                row.z_over_zm
            );
        }
    }
}

#[test]
fn oam_asymmetry_holds_across_the_configuration_sweep() {
    let mut failures = Vec::new();
    for &w0_over_wm in &[0.25, 0.5, 1.0, 2.0] {
        let geom = magnetic_geometry(w0_over_wm);
        for &ell in &[1u32, 3, 5] {
            for n in 0..=3u32 {
                let pair = penetration_pair(ell, n, Spin::Up, &geom).unwrap();
                if pair.oam_sum_min_hbar <= 0.0 {
                    failures.push((w0_over_wm, ell, n, pair.oam_sum_min_hbar));
                }
                assert!(pair.plus.completeness >= 0.999);
                assert!(pair.plus.periodicity_residual < 1e-6);
            }
        }
    }
    assert!(failures.is_empty(), "non-positive OAM sums: {failures:?}");
}
