//! Self-validation suite: closed forms against the evolution equation,
//! parameter ODEs, a deliberately corrupted probe for sensitivity, and a
//! finite-difference propagation cross-check.

use std::path::PathBuf;

use serde::Serialize;

use maglg::beams::{check_parameter_odes, BeamFamily, BeamQuantumNumbers};
use maglg::grid::RadialGrid;
use maglg::propagator::{
    propagate, residual_of_closed_form, residual_with_width_scale, PropagatorConfig,
};

use crate::config::EffectiveConfig;
use crate::error::CliError;
use crate::output::write_json;

/// One named measurement compared against its threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    /// `"<"` or `">"`: the comparison that constitutes a pass.
    pub comparison: &'static str,
    pub pass: bool,
    /// Set on probes that are *supposed* to fail (sensitivity checks);
    /// these do not count against the overall verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_fail: Option<bool>,
}

impl Check {
    fn less(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparison: "<",
            pass: measured < threshold,
            expected_fail: None,
        }
    }

    fn greater(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            comparison: ">",
            pass: measured > threshold,
            expected_fail: None,
        }
    }

    fn expected_to_fail(mut self) -> Self {
        self.expected_fail = Some(true);
        self
    }
}

/// The full validation report, written as `verify.json`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub overall_pass: bool,
    /// `"magnetic"` or `"free_space"`, depending on the configured field.
    pub suite: &'static str,
    pub b_tesla: f64,
    pub kinetic_kev: f64,
    /// Waist used by the probe beams (see below), nm.
    pub probe_w0_nm: f64,
    pub checks: Vec<Check>,
}

/// Quantum-number pairs probed by the residual and ODE checks.
const PROBE_MODES: [(u32, i32); 3] = [(0, 0), (1, 2), (2, -3)];

/// Residual grid size. 16384 points push the fourth-order stencil error
/// well below the 1e-7 pass threshold.
const RESIDUAL_GRID_POINTS: usize = 16384;

fn residual_grid(family: &BeamFamily, z_span: f64) -> RadialGrid {
    RadialGrid::uniform_staggered(8.5 * family.max_width(1.5 * z_span), RESIDUAL_GRID_POINTS)
}

/// Run the suite appropriate for the configured field, write
/// `verify.json`, and return the report with the path written.
///
/// In a magnetic field the probe beams use `w0 = 0.5 w_m` — the canonical
/// strongly-oscillating case — regardless of the configured waist, so
/// that one uniform grid resolves the beam everywhere along a period.
/// The configured field, energy, spin, and quantum numbers are honored.
pub fn verify(cfg: &EffectiveConfig) -> Result<(VerifyReport, PathBuf), CliError> {
    let geometry = cfg.geometry()?;
    let (suite, probe_w0_nm, checks) = if geometry.is_magnetic() {
        let w_m = geometry.w_m()?;
        (
            "magnetic",
            0.5 * w_m,
            magnetic_checks(cfg, 0.5 * w_m)?,
        )
    } else {
        ("free_space", cfg.w0_nm, free_space_checks(cfg)?)
    };
    let overall_pass = checks
        .iter()
        .filter(|c| c.expected_fail != Some(true))
        .all(|c| c.pass);
    let report = VerifyReport {
        overall_pass,
        suite,
        b_tesla: cfg.b_tesla,
        kinetic_kev: cfg.kinetic_kev,
        probe_w0_nm,
        checks,
    };
    let path = write_json(&cfg.out, "verify.json", &report)?;
    Ok((report, path))
}

fn magnetic_checks(cfg: &EffectiveConfig, probe_w0_nm: f64) -> Result<Vec<Check>, CliError> {
    let spin = cfg.spin_value()?;
    let geom = cfg.geometry_with_waist(probe_w0_nm)?;
    let z_m = geom.z_m()?;
    let period = std::f64::consts::PI * z_m;
    let zs: Vec<f64> = (0..5).map(|i| period * i as f64 / 4.0).collect();
    let mut checks = Vec::new();

    // Closed-form families must satisfy their defining parameter ODEs and
    // annihilate the evolution equation across a full period.
    for (n, ell) in PROBE_MODES {
        let qn = BeamQuantumNumbers { n, ell, spin };
        let family = BeamFamily::general_lg(qn, geom)?;
        let ode = check_parameter_odes(&family, &zs)?;
        let ode_worst = ode
            .width_curvature
            .max(ode.curvature_evolution)
            .max(ode.gouy_rate);
        checks.push(Check::less(
            format!("parameter_odes_n{n}_ell{ell}"),
            ode_worst,
            1e-8,
        ));
        let grid = residual_grid(&family, period);
        let worst = zs
            .iter()
            .map(|&z| residual_of_closed_form(&family, z, &grid).map(|r| r.max_abs))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        checks.push(Check::less(
            format!("closed_form_residual_n{n}_ell{ell}"),
            worst,
            1e-7,
        ));
    }

    // The stationary family is an exact eigenmode and must do even better.
    let landau_qn = cfg.quantum_numbers()?;
    let landau = BeamFamily::landau(landau_qn, geom)?;
    let landau_grid = residual_grid(&landau, period);
    let landau_res = residual_of_closed_form(&landau, 0.0, &landau_grid)?.max_abs;
    checks.push(Check::less("stationary_mode_residual", landau_res, 1e-9));

    // Sensitivity probe: a beam with its width corrupted by 10% must be
    // loudly rejected by the same residual. The first check is expected
    // to fail; the second asserts the failure is by a wide margin.
    let probe_qn = BeamQuantumNumbers { n: 1, ell: 2, spin };
    let probe = BeamFamily::general_lg(probe_qn, geom)?;
    let probe_grid = residual_grid(&probe, period);
    let corrupted =
        residual_with_width_scale(&probe, 0.3 * z_m, &probe_grid, 1.1)?.max_abs;
    checks.push(
        Check::less("corrupted_width_closed_form_residual", corrupted, 1e-7)
            .expected_to_fail(),
    );
    checks.push(Check::greater(
        "residual_sensitivity_floor",
        corrupted,
        1e-2,
    ));

    // Finite-difference propagation over a quarter period against the
    // closed form, plus exact norm conservation.
    let oracle_qn = cfg.quantum_numbers()?;
    let oracle_family = BeamFamily::general_lg(oracle_qn, geom)?;
    let target = period / 4.0;
    checks.extend(oracle_checks(&oracle_family, target, "quarter_period")?);

    Ok(checks)
}

fn free_space_checks(cfg: &EffectiveConfig) -> Result<Vec<Check>, CliError> {
    let spin = cfg.spin_value()?;
    let geom = cfg.geometry()?;
    let z_r = geom.z_r;
    let zs: Vec<f64> = (0..5).map(|i| z_r * i as f64 / 4.0).collect();
    let mut checks = Vec::new();

    let qn = cfg.quantum_numbers()?;
    let family = BeamFamily::free_lg(qn, geom);
    let grid = residual_grid(&family, z_r);
    let worst = zs
        .iter()
        .map(|&z| residual_of_closed_form(&family, z, &grid).map(|r| r.max_abs))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    checks.push(Check::less(
        format!("free_closed_form_residual_n{}_ell{}", qn.n, qn.ell),
        worst,
        1e-7,
    ));

    let probe_qn = BeamQuantumNumbers { n: 1, ell: 2, spin };
    let probe = BeamFamily::free_lg(probe_qn, geom);
    let probe_grid = residual_grid(&probe, z_r);
    let corrupted = residual_with_width_scale(&probe, 0.3 * z_r, &probe_grid, 1.1)?.max_abs;
    checks.push(
        Check::less("corrupted_width_closed_form_residual", corrupted, 1e-7)
            .expected_to_fail(),
    );
    checks.push(Check::greater(
        "residual_sensitivity_floor",
        corrupted,
        1e-2,
    ));

    checks.extend(oracle_checks(&family, z_r / 4.0, "quarter_rayleigh")?);

    Ok(checks)
}

/// Propagate the family's profile from the waist to `target` at the
/// default oracle resolution and compare with the closed form.
fn oracle_checks(
    family: &BeamFamily,
    target: f64,
    label: &str,
) -> Result<Vec<Check>, CliError> {
    let pcfg = PropagatorConfig::default_for(family, target)?;
    let initial = family.sample(0.0, &pcfg.grid)?;
    let evolved = propagate(&initial, &family.geometry, family.qn, target, &pcfg)?;
    let closed = family.sample(target, &pcfg.grid)?;
    let l2 = evolved.l2_distance(&closed);
    let drift = (evolved.norm_squared() - initial.norm_squared()).abs();
    Ok(vec![
        Check::less(format!("oracle_propagation_{label}_l2"), l2, 5e-5),
        Check::less("norm_conservation_drift", drift, 1e-12),
    ])
}
