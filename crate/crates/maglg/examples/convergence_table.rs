//! Prints an error table for the Crank-Nicolson oracle against the
//! closed-form magnetic beam: full-period L2 error as a function of grid
//! points and step divisor. Useful for choosing default resolutions.

use std::time::Instant;

use maglg::beams::{BeamFamily, BeamQuantumNumbers, Spin};
use maglg::grid::RadialGrid;
use maglg::propagator::{propagate, PropagatorConfig};
use maglg::units::{geometry_from_lab, LabInputs};

fn main() {
    let probe = geometry_from_lab(LabInputs::new(1.0, 200_000.0, 1e-9).unwrap()).unwrap();
    let w_m = probe.w_m().unwrap();
    let geom =
        geometry_from_lab(LabInputs::new(1.0, 200_000.0, 0.5 * w_m * 1e-9).unwrap()).unwrap();
    let z_m = geom.z_m().unwrap();
    let q = BeamQuantumNumbers {
        n: 1,
        ell: 2,
        spin: Spin::Up,
    };
    let fam = BeamFamily::general_lg(q, geom).unwrap();
    let period = std::f64::consts::PI * z_m;
    let r_max = 8.5 * fam.max_width(period);

    println!("points  divisor  L2_error      seconds");
    for &points in &[8192usize, 16384, 32768, 49152] {
        let grid = RadialGrid::uniform_staggered(r_max, points);
        let initial = fam.sample(0.0, &grid).unwrap();
        let reference = fam.sample(period, &grid).unwrap();
        for &div in &[1000.0, 2000.0, 4000.0, 8000.0] {
            let cfg = PropagatorConfig::new(z_m / div, grid.clone()).unwrap();
            let t0 = Instant::now();
            let out = propagate(&initial, &geom, q, period, &cfg).unwrap();
            let dt = t0.elapsed().as_secs_f64();
            let err = out.l2_distance(&reference);
            println!("{points:6}  {div:7}  {err:.6e}  {dt:.2}");
        }
    }
}
