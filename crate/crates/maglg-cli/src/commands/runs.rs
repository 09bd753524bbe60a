//! Observable evaluation, the paired field-penetration experiment, and
//! explicit finite-difference propagation runs.

use std::path::PathBuf;

use serde::Serialize;

use maglg::beams::FamilyKind;
use maglg::modes::penetration_pair;
use maglg::observables::evaluate;
use maglg::propagator::{propagate_with, PropagatorConfig};
use maglg::grid::RadialGrid;

use crate::config::EffectiveConfig;
use crate::error::CliError;
use crate::output::{write_csv, write_json, write_text};

/// Evaluate the full observable set of the configured beam at `z_nm` and
/// write `observables.json`.
pub fn observables(cfg: &EffectiveConfig, z_nm: f64) -> Result<PathBuf, CliError> {
    let family = cfg.family()?;
    let set = evaluate(&family, z_nm)?;
    write_json(&cfg.out, "observables.json", &set)
}

/// Run the paired `+|ell|` / `-|ell|` injection experiment at waist
/// `w0 = w0_over_wm * w_m` (the configured waist is ignored: the
/// experiment is defined by the ratio) and write `penetration.json` plus
/// one `<r^2>(z)` table per handedness.
pub fn penetrate(
    cfg: &EffectiveConfig,
    w0_over_wm: f64,
) -> Result<Vec<PathBuf>, CliError> {
    if !(w0_over_wm > 0.0) || !w0_over_wm.is_finite() {
        return Err(CliError::Config(format!(
            "--w0-over-wm must be positive and finite, got {w0_over_wm}"
        )));
    }
    let probe = cfg.geometry()?;
    let w_m = probe.w_m()?;
    let geom = cfg.geometry_with_waist(w0_over_wm * w_m)?;
    let pair = penetration_pair(cfg.ell.unsigned_abs(), cfg.n, cfg.spin_value()?, &geom)?;

    let mut written = Vec::new();
    for (name, report) in [("r2_plus.csv", &pair.plus), ("r2_minus.csv", &pair.minus)] {
        let rows: Vec<[f64; 2]> = report
            .r2_table
            .iter()
            .map(|row| [row.z_over_zm, row.r2_over_wm2])
            .collect();
        written.push(write_csv(&cfg.out, name, "z_over_zm,r2_over_wm2", rows)?);
    }
    written.push(write_json(&cfg.out, "penetration.json", &pair)?);
    Ok(written)
}

/// One snapshot emitted during a propagation run.
#[derive(Debug, Clone, Serialize)]
pub struct FrameRecord {
    pub index: usize,
    pub step: usize,
    pub z_nm: f64,
    pub norm: f64,
    pub file: String,
}

/// Summary of a propagation run, written as `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct PropagateSummary {
    pub family: &'static str,
    pub n: u32,
    pub ell: i32,
    pub s_z: &'static str,
    pub b_tesla: f64,
    pub kinetic_kev: f64,
    pub w0_nm: f64,
    pub z_target_nm: f64,
    pub steps: usize,
    pub dz_nm: f64,
    pub grid_points: usize,
    pub r_max_nm: f64,
    pub final_norm: f64,
    pub norm_drift_abs: f64,
    pub boundary_leak_final: f64,
    /// L2 distance to the closed form at the final plane; absent when the
    /// initial profile is not a closed-form solution of the configured
    /// field (e.g. a free-space beam injected into a magnet).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l2_vs_closed_form: Option<f64>,
    pub frames: Vec<FrameRecord>,
}

/// Number of steps `propagate_with` will take for a span and step target,
/// mirrored here so the snapshot cadence can be derived up front.
fn planned_steps(span: f64, dz: f64) -> usize {
    let ratio = span.abs() / dz.abs();
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) && rounded >= 1.0 {
        rounded as usize
    } else {
        ratio.ceil().max(1.0) as usize
    }
}

/// Propagate the configured beam from its waist plane to
/// `z = z_over_scale * axial_scale`, writing `frames`-ish evenly spaced
/// profile snapshots and `summary.json`.
pub fn run_propagate(
    cfg: &EffectiveConfig,
    z_over_scale: f64,
    frames: usize,
) -> Result<Vec<PathBuf>, CliError> {
    if !z_over_scale.is_finite() {
        return Err(CliError::Config(format!(
            "--z-over-scale must be finite, got {z_over_scale}"
        )));
    }
    if frames == 0 {
        return Err(CliError::Config("--frames must be at least 1".into()));
    }
    let family = cfg.family()?;
    let geometry = family.geometry;
    let scale = geometry.axial_scale();
    let z_target = z_over_scale * scale;

    let base = PropagatorConfig::default_for(&family, z_target.abs().max(0.25 * scale))?;
    let dz = match cfg.dz_over_zm {
        Some(frac) => frac * scale,
        None => base.dz,
    };
    let grid = match cfg.grid_points {
        Some(m) => RadialGrid::uniform_staggered(base.grid.r_max(), m),
        None => base.grid,
    };
    let pcfg = PropagatorConfig::new(dz, grid)?;

    let initial = family.sample(0.0, &pcfg.grid)?;
    let initial_norm = initial.norm_squared();

    let mut written = Vec::new();
    let mut frame_records = Vec::new();
    let initial_file = "frame_000.csv".to_string();
    written.push(write_text(&cfg.out, &initial_file, &initial.csv_string())?);
    frame_records.push(FrameRecord {
        index: 0,
        step: 0,
        z_nm: 0.0,
        norm: initial_norm,
        file: initial_file,
    });

    let steps = if z_target == 0.0 {
        0
    } else {
        planned_steps(z_target, pcfg.dz)
    };
    let snap_every = steps.div_ceil(frames).max(1);

    let mut frame_error: Option<CliError> = None;
    let mut index = 0usize;
    let evolved = propagate_with(
        &initial,
        &geometry,
        family.qn,
        z_target,
        &pcfg,
        snap_every,
        |step, state| {
            if frame_error.is_some() {
                return;
            }
            index += 1;
            let file = format!("frame_{index:03}.csv");
            match write_text(&cfg.out, &file, &state.csv_string()) {
                Ok(path) => {
                    written.push(path);
                    frame_records.push(FrameRecord {
                        index,
                        step,
                        z_nm: state.z,
                        norm: state.norm_squared(),
                        file,
                    });
                }
                Err(e) => frame_error = Some(e),
            }
        },
    )?;
    if let Some(e) = frame_error {
        return Err(e);
    }

    let closed_form_applies = match family.kind {
        FamilyKind::FreeLg => !geometry.is_magnetic(),
        FamilyKind::LandauParaxial | FamilyKind::GeneralLg => geometry.is_magnetic(),
    };
    let l2_vs_closed_form = if closed_form_applies {
        let closed = family.sample(z_target, &pcfg.grid)?;
        Some(evolved.l2_distance(&closed))
    } else {
        None
    };

    let final_norm = evolved.norm_squared();
    let summary = PropagateSummary {
        family: family.kind.name(),
        n: family.qn.n,
        ell: family.qn.ell,
        s_z: family.qn.spin.label(),
        b_tesla: cfg.b_tesla,
        kinetic_kev: cfg.kinetic_kev,
        w0_nm: cfg.w0_nm,
        z_target_nm: z_target,
        steps,
        dz_nm: if steps == 0 {
            pcfg.dz
        } else {
            z_target / steps as f64
        },
        grid_points: pcfg.grid.len(),
        r_max_nm: pcfg.grid.r_max(),
        final_norm,
        norm_drift_abs: (final_norm - initial_norm).abs(),
        boundary_leak_final: evolved.boundary_leak(),
        l2_vs_closed_form,
        frames: frame_records,
    };
    written.push(write_json(&cfg.out, "summary.json", &summary)?);
    Ok(written)
}
