//! Paraxial twisted-electron beams in a uniform longitudinal magnetic field.
//!
//! This crate models the propagation of Laguerre-Gauss (LG) electron
//! vortex beams along a constant magnetic field `B ẑ`. It provides:
//!
//! * closed-form beam families ([`beams`]): the free-space LG beam, the
//!   stationary Landau-paraxial beam whose width is locked to the
//!   magnetic length scale, and the general oscillating LG beam that
//!   breathes between an injected waist and the magnetic waist;
//! * an independent Crank-Nicolson propagator ([`propagator`]) for the
//!   radial paraxial equation at fixed orbital angular momentum, used to
//!   cross-validate the closed forms;
//! * physical observables ([`observables`]): mean squared radius,
//!   quadrupole moment, quantized axial velocity and effective mass,
//!   transverse-energy rate, kinetic orbital angular momentum, and the
//!   cyclotron period / helix pitch of the beam centroid;
//! * decomposition into the discrete Landau radial basis ([`modes`]) and
//!   a "penetration" experiment following a free-space beam entering the
//!   field region.
//!
//! Internally all lengths are in nanometres and wavenumbers in 1/nm;
//! [`units`] converts from laboratory inputs (tesla, keV, metres).
pub mod beams;
pub mod error;
pub mod grid;
pub mod laguerre;
pub mod modes;
pub mod observables;
pub mod propagator;
pub mod quadrature;
pub mod units;
pub mod wavefunction;

pub use error::{Error, Result};
