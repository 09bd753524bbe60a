//! Radial grids for sampling and propagating wavefunctions.
//!
//! Two kinds are supported:
//!
//! * a **uniform staggered** grid with points `r_j = (j + 1/2) dr`, the
//!   natural mesh for the finite-difference propagator (the half-cell
//!   offset keeps every point away from the coordinate singularity at
//!   `r = 0` and makes the flux-conservative Laplacian symmetric);
//! * a **Gauss-Legendre** grid on `[0, r_max]`, used for spectrally
//!   accurate integrals in mode decomposition and observables.
//!
//! Both carry quadrature weights for `integral f(r) dr`; radial-measure
//! factors `2 pi r` are applied by the integrand.

use std::sync::Arc;

use crate::quadrature::gauss_legendre_on;

/// How the grid points were generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Uniform `r_j = (j + 1/2) dr` with midpoint weights `dr`.
    UniformStaggered,
    /// Gauss-Legendre nodes and weights mapped to `[0, r_max]`.
    GaussLegendre,
}

/// A radial grid with integration weights.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    kind: GridKind,
    r_max: f64,
    points: Arc<Vec<f64>>,
    weights: Arc<Vec<f64>>,
}

impl RadialGrid {
    /// Uniform staggered grid of `m` points covering `(0, r_max)`.
    pub fn uniform_staggered(r_max: f64, m: usize) -> Self {
        let dr = r_max / m as f64;
        let points: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) * dr).collect();
        let weights = vec![dr; m];
        Self {
            kind: GridKind::UniformStaggered,
            r_max,
            points: Arc::new(points),
            weights: Arc::new(weights),
        }
    }

    /// Gauss-Legendre grid of `m` points on `[0, r_max]`.
    pub fn gauss_legendre(r_max: f64, m: usize) -> Self {
        let rule = gauss_legendre_on(0.0, r_max, m);
        Self {
            kind: GridKind::GaussLegendre,
            r_max,
            points: Arc::new(rule.nodes),
            weights: Arc::new(rule.weights),
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Grid spacing for uniform grids, `None` otherwise.
    pub fn dr(&self) -> Option<f64> {
        match self.kind {
            GridKind::UniformStaggered => Some(self.r_max / self.len() as f64),
            GridKind::GaussLegendre => None,
        }
    }

    /// Whether two grids share kind, extent, and size (hence identical
    /// points) so that values sampled on one can be combined with the other.
    pub fn compatible(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.len() == other.len()
            && (self.r_max - other.r_max).abs() <= 1e-12 * self.r_max.abs()
    }

    /// Integrate `f(r)` against the radial measure `2 pi r dr`.
    pub fn integrate_radial<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(self.weights.iter())
            .map(|(&r, &w)| w * 2.0 * std::f64::consts::PI * r * f(r))
            .sum()
    }
}
