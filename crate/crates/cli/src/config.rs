use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ebm_core::scenarios::opposite_mode;
use ebm_core::{Statistics, DEFAULT_TOL};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticsArg {
    Fermion,
    Boson,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Fermion => Statistics::Fermion,
            StatisticsArg::Boson => Statistics::Boson,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ebm", version, about = "Local operations and entanglement by measurement on two identical particles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,

    /// Report format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub output: OutputFormat,

    /// Relative zero threshold for the event tests.
    #[arg(long = "tol", default_value_t = DEFAULT_TOL, global = true)]
    pub tolerance: f64,

    /// Exchange statistics of the particles.
    #[arg(long, value_enum, default_value = "fermion", global = true)]
    pub statistics: StatisticsArg,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Project a momentum pair onto |k_a k_b><k_a k_b| (local operation example).
    MomentumScenario(LatticeArgs),
    /// Measure a momentum pair with position windows around x_A and x_B.
    PositionScenario {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Centre of the slot-1 (Alice) window.
        #[arg(long = "xa", default_value_t = 2)]
        x_a: usize,
        /// Centre of the slot-2 (Bob) window.
        #[arg(long = "xb", default_value_t = 5)]
        x_b: usize,
        /// Window width in sites (odd).
        #[arg(long, default_value_t = 1)]
        width: usize,
    },
    /// Classify a measure file against a reference state file.
    Classify {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        measure: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// Number of lattice sites L.
    #[arg(long = "lattice", default_value_t = 8)]
    pub lattice_size: usize,
    /// Momentum mode of the spin-up particle, k_a = 2π m_a / L.
    #[arg(long, default_value_t = 1)]
    pub mode_a: usize,
    /// Momentum mode of the spin-down particle; defaults to L - m_a (that is, -k_a).
    #[arg(long)]
    pub mode_b: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    MomentumScenario,
    PositionScenario,
    Classify { state: PathBuf, measure: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::MomentumScenario => "momentum-scenario",
            Command::PositionScenario => "position-scenario",
            Command::Classify { .. } => "classify",
        }
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lattice_size: usize,
    pub mode_a: usize,
    pub mode_b: usize,
    pub x_a: usize,
    pub x_b: usize,
    pub width: usize,
    pub statistics: Statistics,
    pub tolerance: f64,
    pub output_format: OutputFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(CliError::Config(format!(
                "tolerance must be a positive number, got {}",
                self.tolerance
            )));
        }
        if !matches!(self.command, Command::Classify { .. }) && self.lattice_size < 2 {
            return Err(CliError::Config(format!(
                "lattice size must be at least 2, got {}",
                self.lattice_size
            )));
        }
        Ok(())
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let base = |command, lattice: Option<LatticeArgs>| {
            let (lattice_size, mode_a, mode_b) = match lattice {
                Some(l) => {
                    let mode_b = l
                        .mode_b
                        .unwrap_or_else(|| opposite_mode(l.mode_a, l.lattice_size.max(1)));
                    (l.lattice_size, l.mode_a, mode_b)
                }
                None => (0, 0, 0),
            };
            RunConfig {
                command,
                lattice_size,
                mode_a,
                mode_b,
                x_a: 0,
                x_b: 0,
                width: 1,
                statistics: cli.statistics.into(),
                tolerance: cli.tolerance,
                output_format: cli.output,
            }
        };
        match cli.command {
            CommandArgs::MomentumScenario(l) => base(Command::MomentumScenario, Some(l)),
            CommandArgs::PositionScenario {
                lattice,
                x_a,
                x_b,
                width,
            } => RunConfig {
                x_a,
                x_b,
                width,
                ..base(Command::PositionScenario, Some(lattice))
            },
            CommandArgs::Classify { state, measure } => base(Command::Classify { state, measure }, None),
        }
    }
}
