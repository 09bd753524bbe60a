//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by beam construction, numerical propagation, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// Kinetic energy must be strictly positive (eV).
    #[error("kinetic energy must be positive, got {0} eV")]
    NonPositiveKineticEnergy(f64),

    /// Beam waist must be strictly positive (m or nm depending on caller).
    #[error("beam waist must be positive, got {0}")]
    NonPositiveWaist(f64),

    /// Magnetic field magnitude must be non-negative (tesla).
    #[error("magnetic field must be non-negative, got {0} T")]
    NegativeField(f64),

    /// Laguerre polynomial degree and order must be non-negative integers.
    #[error("Laguerre polynomial needs n >= 0 and alpha >= 0, got n = {n}, alpha = {alpha}")]
    LaguerreDomain { n: i64, alpha: i64 },

    /// Laguerre polynomial argument must be finite and non-negative.
    #[error("Laguerre polynomial argument must be finite and non-negative, got {0}")]
    LaguerreArgument(f64),

    /// Operation requires a magnetic field but the beam is in free space.
    #[error("operation requires a non-zero magnetic field")]
    FreeSpace,

    /// Operation is only defined for a specific beam family.
    #[error("operation requires the {expected} family, got {got}")]
    WrongFamily {
        expected: &'static str,
        got: &'static str,
    },

    /// The radial grid does not extend far enough to contain the beam.
    #[error(
        "radial grid reaches {r_max} nm but the beam width is {width} nm; \
         need r_max >= {needed} nm"
    )]
    GridCoverage { r_max: f64, width: f64, needed: f64 },

    /// Probability density reached the outer grid boundary during propagation.
    #[error(
        "probability density {density:.3e} at the outer boundary exceeded the cap \
         {cap:.3e} at z = {z} nm; enlarge the grid"
    )]
    BoundaryLeak { z: f64, density: f64, cap: f64 },

    /// A wavefunction expected to be normalized is not.
    #[error("wavefunction norm^2 is {0}, expected 1 within tolerance")]
    NotNormalized(f64),

    /// Propagation step exceeds the stability/accuracy bound.
    #[error("step dz = {dz} nm exceeds the maximum {max} nm for this configuration")]
    StepTooLarge { dz: f64, max: f64 },

    /// The propagator requires a uniform staggered grid.
    #[error("operation requires a uniform staggered radial grid")]
    NonUniformGrid,

    /// Landau-basis truncation failed to capture the requested state.
    #[error(
        "basis truncated at n_max = {n_max} captures only {completeness:.6} of the norm; \
         try n_max >= {suggested}"
    )]
    BasisTruncation {
        n_max: usize,
        completeness: f64,
        suggested: usize,
    },

    /// Two wavefunctions or a wavefunction and a basis use different grids.
    #[error("radial grids do not match")]
    GridMismatch,

    /// Orbital angular momentum mismatch between a state and a basis.
    #[error("state has ell = {state} but the basis has ell = {basis}")]
    EllMismatch { state: i32, basis: i32 },

    /// The transverse-energy rate is too large relative to the wavenumber
    /// for the paraxial expansion to be trusted.
    #[error("paraxiality parameter Lambda/k = {0:.3e} is too large for the expansion")]
    ParaxialityViolation(f64),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
