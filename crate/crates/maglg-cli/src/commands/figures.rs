//! Width-curve and density-profile data sets.

use std::path::PathBuf;

use maglg::beams::{BeamFamily, BeamQuantumNumbers};
use maglg::grid::RadialGrid;

use crate::config::EffectiveConfig;
use crate::error::CliError;
use crate::output::{write_csv, write_json};

/// Number of samples per emitted curve.
const CURVE_POINTS: usize = 400;

/// Waist ratios for the width curves, with their filename labels.
const WIDTH_RATIOS: [(f64, &str); 3] = [(0.5, "0.5"), (1.0, "1"), (2.0, "2")];

/// Emit `w(z)/w_m` against `z/z_m` over `z` in `[-2 z_m, 2 z_m]` for the
/// oscillating family at waist ratios `w0/w_m` in {0.5, 1, 2}, plus the
/// free-space curve for the 0.5 ratio. The curves depend only on the
/// geometry, so the configured quantum numbers merely label the run.
pub fn figure1(cfg: &EffectiveConfig) -> Result<Vec<PathBuf>, CliError> {
    let probe = cfg.geometry()?;
    let w_m = probe.w_m()?;
    let z_m = probe.z_m()?;
    let qn = cfg.quantum_numbers()?;
    let mut written = Vec::new();

    let curve = |family: &BeamFamily| -> Vec<[f64; 2]> {
        (0..CURVE_POINTS)
            .map(|i| {
                let z = -2.0 * z_m + 4.0 * z_m * i as f64 / (CURVE_POINTS - 1) as f64;
                [z / z_m, family.width_at(z) / w_m]
            })
            .collect()
    };

    for (ratio, label) in WIDTH_RATIOS {
        let geom = cfg.geometry_with_waist(ratio * w_m)?;
        let family = BeamFamily::general_lg(qn, geom)?;
        written.push(write_csv(
            &cfg.out,
            &format!("width_w0_over_wm_{label}.csv"),
            "z_over_zm,w_over_wm",
            curve(&family),
        )?);
    }

    let free_geom = cfg.geometry_with_waist(0.5 * w_m)?;
    let free_family = BeamFamily::free_lg(qn, free_geom);
    written.push(write_csv(
        &cfg.out,
        "width_free_w0_over_wm_0.5.csv",
        "z_over_zm,w_over_wm",
        curve(&free_family),
    )?);

    Ok(written)
}

/// Emit transverse radial densities `2 pi r |psi(r)|^2` for the canonical
/// panels: (a) matched waist `w0 = w_m` at `z = 0` and `z = z_m` (the two
/// coincide — the beam is stationary), (b) `w0 = 0.5 w_m` at the waist,
/// (c) the same beam one magnetic Rayleigh range downstream. The panel
/// definition fixes the waist ratios and the quantum numbers `n = 1`,
/// `ell = 2`; the configured field, energy, and spin are honored.
pub fn figure2(cfg: &EffectiveConfig) -> Result<Vec<PathBuf>, CliError> {
    let probe = cfg.geometry()?;
    let w_m = probe.w_m()?;
    let z_m = probe.z_m()?;
    let qn = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: cfg.spin_value()?,
    };

    let matched = BeamFamily::general_lg(qn, cfg.geometry_with_waist(w_m)?)?;
    let breathing = BeamFamily::general_lg(qn, cfg.geometry_with_waist(0.5 * w_m)?)?;

    // One common grid for all panels, wide enough for the broadest state
    // (the 0.5-ratio beam at z_m).
    let r_max = 8.0 * breathing.width_at(z_m);
    let grid = RadialGrid::uniform_staggered(r_max, CURVE_POINTS);

    let panels: [(&str, &BeamFamily, f64); 4] = [
        ("panel_a_z0", &matched, 0.0),
        ("panel_a_zm", &matched, z_m),
        ("panel_b", &breathing, 0.0),
        ("panel_c", &breathing, z_m),
    ];

    let mut written = Vec::new();
    for (name, family, z) in panels {
        let state = family.sample(z, &grid)?;
        let rows: Vec<[f64; 2]> = grid
            .points()
            .iter()
            .zip(&state.values)
            .map(|(&r, v)| [r, 2.0 * std::f64::consts::PI * r * v.norm_sqr()])
            .collect();
        written.push(write_csv(
            &cfg.out,
            &format!("{name}.csv"),
            "r_nm,density_per_nm",
            rows,
        )?);
        written.push(write_json(
            &cfg.out,
            &format!("{name}.json"),
            &family.sidecar(z),
        )?);
    }
    Ok(written)
}
