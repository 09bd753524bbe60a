//! Subcommand implementations.

pub mod figures;
pub mod runs;
pub mod verify;
