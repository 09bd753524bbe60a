//! Radial wavefunctions sampled on a grid.
//!
//! A [`RadialWavefunction`] stores the complex radial profile `psi(r)` of a
//! state `Psi = psi(r) e^{i ell phi}` at a fixed axial position `z`. The
//! azimuthal phase is carried symbolically through the `ell` quantum number;
//! all norms and overlaps include the `2 pi r` measure of the plane.

use num_complex::Complex64;

use crate::grid::RadialGrid;

/// A complex radial profile at fixed `z` and fixed orbital angular momentum.
#[derive(Debug, Clone)]
pub struct RadialWavefunction {
    /// Orbital angular momentum quantum number of the full state.
    pub ell: i32,
    /// Axial position, nm.
    pub z: f64,
    /// The radial grid the values live on.
    pub grid: RadialGrid,
    /// `psi(r_j)` for each grid point.
    pub values: Vec<Complex64>,
}

impl RadialWavefunction {
    /// `integral |psi|^2 2 pi r dr`.
    pub fn norm_squared(&self) -> f64 {
        self.grid
            .points()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.values)
            .map(|((&r, &w), v)| w * 2.0 * std::f64::consts::PI * r * v.norm_sqr())
            .sum()
    }

    /// Rescale so that `norm_squared() == 1`; returns the factor applied.
    pub fn normalize(&mut self) -> f64 {
        let n2 = self.norm_squared();
        let factor = 1.0 / n2.sqrt();
        for v in &mut self.values {
            *v *= factor;
        }
        factor
    }

    /// `integral conj(self) other 2 pi r dr` on a shared grid.
    ///
    /// Panics in debug builds if the grids differ; callers that take
    /// user-provided states should check [`RadialGrid::compatible`] first.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        debug_assert!(self.grid.compatible(&other.grid));
        self.grid
            .points()
            .iter()
            .zip(self.grid.weights())
            .zip(self.values.iter().zip(&other.values))
            .map(|((&r, &w), (a, b))| {
                a.conj() * b * (w * 2.0 * std::f64::consts::PI * r)
            })
            .sum()
    }

    /// L2 distance `sqrt(integral |self - other|^2 2 pi r dr)`.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        debug_assert!(self.grid.compatible(&other.grid));
        self.grid
            .points()
            .iter()
            .zip(self.grid.weights())
            .zip(self.values.iter().zip(&other.values))
            .map(|((&r, &w), (a, b))| {
                w * 2.0 * std::f64::consts::PI * r * (a - b).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `<r^2> = integral r^2 |psi|^2 2 pi r dr / norm^2`.
    pub fn r2_mean(&self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&r, &w), v) in self
            .grid
            .points()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.values)
        {
            let meas = w * 2.0 * std::f64::consts::PI * r * v.norm_sqr();
            num += r * r * meas;
            den += meas;
        }
        num / den
    }

    /// Maximum of `|psi|^2` over the grid.
    pub fn peak_abs2(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// `|psi|^2` at the outermost grid point — a cheap leak detector for
    /// absorbing-free propagation on a finite domain.
    pub fn boundary_leak(&self) -> f64 {
        self.values.last().map_or(0.0, |v| v.norm_sqr())
    }

    /// Complex conjugate of the state; flips the sign of `ell` because
    /// `conj(e^{i ell phi}) = e^{-i ell phi}`.
    pub fn conjugate(&self) -> Self {
        Self {
            ell: -self.ell,
            z: self.z,
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// CSV rendering of the profile: one row per grid point. The radial
    /// profile is normalized as `integral |psi|^2 2 pi r dr = 1`, so `psi`
    /// carries units of 1/nm.
    pub fn csv_string(&self) -> String {
        let mut out = String::from("r_nm,re_psi_per_nm,im_psi_per_nm,abs2_per_nm2\n");
        for (&r, v) in self.grid.points().iter().zip(&self.values) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r,
                v.re,
                v.im,
                v.norm_sqr()
            ));
        }
        out
    }
}
