//! Command-line front end: scenario configuration, CSV emission and the Rydberg table.

pub mod commands;
pub mod config;

pub use commands::{
    cmd_compare_asymptotics, cmd_fresnel, cmd_greens, cmd_sweep, cmd_table, num, numeric_contribution,
    relative_deviation, table_row, Report, TableRow, NON_CONVERGENCE, TABLE_NBARS, TABLE_PRINTED,
};
pub use config::{grid, GreensMethod, RawConfig, RegimeChoice};

use clap::{Args, Parser, Subcommand};
use cpshift_core::{Error, Result};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cpshift", version, about = "Casimir-Polder frequency shifts of moving atoms near planar media")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Rydberg-atom table (rotatory strength, bare and velocity shifts)
    Table,
    /// Shift breakdown over a z grid
    Sweep,
    /// Coincident-point Green's tensor entries over a z grid
    Greens,
    /// Reflection coefficients against k_par/(omega/c)
    Fresnel,
    /// Numerical shifts against the retarded or nonretarded limit forms
    CompareAsymptotics,
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Scenario file with `key = value` lines
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Medium kind (perfect-conductor, nonreciprocal-mirror, topological-insulator, chiral-mirror, isotropic-chiral)
    #[arg(long, global = true)]
    pub medium: Option<String>,
    /// Output CSV path (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Speed along x in m/s
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub velocity: Option<f64>,
    /// Single atom-surface distance in m
    #[arg(long, global = true)]
    pub z: Option<f64>,
    /// Principal quantum number of the Rydberg transition
    #[arg(long, global = true)]
    pub nbar: Option<u32>,
    /// retarded, nonretarded or full
    #[arg(long, global = true)]
    pub regime: Option<String>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(command: Command, flags: &Flags) -> Result<RawConfig> {
    let mut raw = RawConfig::default();
    if command == Command::Table {
        raw.set("kinematics.v_x", "300")?;
        raw.set("kinematics.grid", "single")?;
    }
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
        raw.merge_str(&text)?;
    }
    if let Some(m) = &flags.medium {
        raw.set("medium.kind", m.as_str())?;
    }
    if let Some(p) = &flags.out {
        raw.set("output.path", p.display().to_string())?;
    }
    if let Some(v) = flags.velocity {
        raw.set("kinematics.v_x", v.to_string())?;
        raw.set("kinematics.v_y", "0")?;
    }
    if let Some(z) = flags.z {
        raw.set("kinematics.z_a", z.to_string())?;
        raw.set("kinematics.grid", "single")?;
    }
    if let Some(n) = flags.nbar {
        raw.set("transition.n_bar", n.to_string())?;
    }
    if let Some(r) = &flags.regime {
        raw.set("compare.regime", r.as_str())?;
    }
    if let Some(t) = flags.tol {
        raw.set("numerics.rel_tol", t.to_string())?;
    }
    Ok(raw)
}

pub fn execute(command: Command, flags: &Flags) -> Result<(Report, RawConfig)> {
    let raw = resolve_config(command, flags)?;
    let report = match command {
        Command::Table => {
            let n_bars = match flags.nbar {
                Some(n) => vec![n],
                None => TABLE_NBARS.to_vec(),
            };
            cmd_table(&raw, &n_bars)?
        }
        Command::Sweep => cmd_sweep(&raw)?,
        Command::Greens => cmd_greens(&raw)?,
        Command::Fresnel => cmd_fresnel(&raw)?,
        Command::CompareAsymptotics => cmd_compare_asymptotics(&raw)?,
    };
    Ok((report, raw))
}

/// Runs a parsed command line and returns the process exit status:
/// 0 on success, 1 when rows did not converge, 2 on configuration or validation errors.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli.command, &cli.flags) {
        Ok((report, raw)) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let written = match raw.output() {
                Some(path) => std::fs::write(&path, &report.csv).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", report.csv);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return 2;
            }
            if report.flagged > 0 {
                eprintln!("error: {} row(s) flagged {NON_CONVERGENCE}", report.flagged);
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
