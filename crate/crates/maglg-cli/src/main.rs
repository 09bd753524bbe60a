//! `maglg` — data-only command line front end for the twisted-electron
//! beam library: width curves, density profiles, observables, validation
//! runs, the paired penetration experiment, and explicit propagation.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{load_config_file, EffectiveConfig};
use crate::error::CliError;
use crate::output::{ensure_dir, write_json};

/// Shared physical and numerical parameters. Precedence: CLI flag over
/// config-file entry over built-in default (B = 1 T, T = 200 keV,
/// w0 = 1 nm, n = 1, ell = 2, spin +, family general).
#[derive(Debug, Args)]
pub struct CliOverrides {
    /// JSON configuration file; flags given here override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Magnetic field along the beam axis, tesla (0 = free space).
    #[arg(long = "B-tesla", global = true, value_name = "TESLA")]
    pub b_tesla: Option<f64>,

    /// Electron kinetic energy, keV.
    #[arg(long = "kinetic-keV", global = true, value_name = "KEV")]
    pub kinetic_kev: Option<f64>,

    /// Injected beam waist, nm.
    #[arg(long = "w0-nm", global = true, value_name = "NM")]
    pub w0_nm: Option<f64>,

    /// Radial quantum number.
    #[arg(long, global = true, value_name = "N")]
    pub n: Option<u32>,

    /// Topological charge (may be negative).
    #[arg(long, global = true, value_name = "INT", allow_hyphen_values = true)]
    pub ell: Option<i32>,

    /// Spin projection: "+" or "-".
    #[arg(long, global = true, value_name = "+|-", allow_hyphen_values = true)]
    pub spin: Option<String>,

    /// Beam family: "free", "landau", or "general".
    #[arg(long, global = true, value_name = "NAME")]
    pub family: Option<String>,

    /// Propagation step as a fraction of the natural axial scale
    /// (z_m in a field, z_R in free space). Default: built-in resolution.
    #[arg(long = "dz-over-zm", global = true, value_name = "FRACTION")]
    pub dz_over_zm: Option<f64>,

    /// Radial grid points for propagation. Default: built-in resolution.
    #[arg(long = "grid-points", global = true, value_name = "COUNT")]
    pub grid_points: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Beam-width curves w(z)/w_m for waist ratios 0.5, 1, 2 plus the
    /// free-space reference curve.
    #[command(name = "figure1")]
    Figure1,

    /// Radial density profiles: matched-waist panels at two z planes and
    /// the 0.5-ratio beam at its waist and one axial scale downstream.
    #[command(name = "figure2")]
    Figure2,

    /// Run the numerical self-validation suite; exits 3 if any check
    /// (other than the intentional sensitivity probe) fails.
    #[command(name = "verify")]
    Verify,

    /// Evaluate all observables of the configured beam at one z plane.
    #[command(name = "observables")]
    Observables {
        /// Axial position of the evaluation plane, nm.
        #[arg(long = "z-nm", default_value_t = 0.0, allow_hyphen_values = true)]
        z_nm: f64,
    },

    /// Paired +/- ell injection: decompose a free beam over the field
    /// eigenmodes and follow both handednesses for two width periods.
    #[command(name = "penetrate")]
    Penetrate {
        /// Injected waist as a fraction of the magnetic waist.
        #[arg(long = "w0-over-wm", default_value_t = 0.5)]
        w0_over_wm: f64,
    },

    /// Propagate the configured beam with the finite-difference scheme
    /// and write profile snapshots plus a summary.
    #[command(name = "propagate")]
    Propagate {
        /// Target plane as a fraction of the natural axial scale.
        #[arg(
            long = "z-over-scale",
            default_value_t = std::f64::consts::PI,
            allow_hyphen_values = true
        )]
        z_over_scale: f64,

        /// Approximate number of profile snapshots to write.
        #[arg(long, default_value_t = 5)]
        frames: usize,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "maglg",
    version,
    about = "Twisted-electron beams in a uniform magnetic field: \
             closed-form families, observables, and cross-validating numerics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    overrides: CliOverrides,
}

fn main() {
    // Clap itself exits with code 2 on unparsable command lines, matching
    // the configuration-error code used below.
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let file = cli
        .overrides
        .config
        .as_deref()
        .map(load_config_file)
        .transpose()?;
    let cfg = EffectiveConfig::resolve(&cli.overrides, file)?;
    ensure_dir(&cfg.out)?;
    let echo = write_json(&cfg.out, "effective_config.json", &cfg)?;
    println!("wrote {}", echo.display());

    match cli.command {
        Command::Figure1 => {
            for path in commands::figures::figure1(&cfg)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Figure2 => {
            for path in commands::figures::figure2(&cfg)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Verify => {
            let (report, path) = commands::verify::verify(&cfg)?;
            for check in &report.checks {
                let verdict = if check.pass { "PASS" } else { "FAIL" };
                let note = if check.expected_fail == Some(true) {
                    " (failure expected: sensitivity probe)"
                } else {
                    ""
                };
                println!(
                    "{verdict} {}: measured {:.3e}, required {} {:.0e}{note}",
                    check.name, check.measured, check.comparison, check.threshold
                );
            }
            println!("wrote {}", path.display());
            if report.overall_pass {
                println!("verification: PASS");
            } else {
                println!("verification: FAIL");
                return Err(CliError::Numerical(
                    "one or more verification checks failed; see verify.json".into(),
                ));
            }
        }
        Command::Observables { z_nm } => {
            let path = commands::runs::observables(&cfg, z_nm)?;
            println!("wrote {}", path.display());
        }
        Command::Penetrate { w0_over_wm } => {
            for path in commands::runs::penetrate(&cfg, w0_over_wm)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Propagate {
            z_over_scale,
            frames,
        } => {
            for path in commands::runs::run_propagate(&cfg, z_over_scale, frames)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
