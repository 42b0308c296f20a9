//! `kraus` command-line front end.
//!
//! Exit codes: 0 ok, 1 a tolerance gate failed, 2 invalid input, 3 I/O
//! failure. Errors go to standard error as one JSON object
//! `{"error": kind, "message": text}`; standard output gets a single
//! summary line.

mod commands;
pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Parse(String),
    Usage(String),
    Io(String),
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Parse(_) => "ParseError",
            CliError::Usage(_) => "UsageError",
            CliError::Io(_) => "IoError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Parse(m) | CliError::Usage(m) | CliError::Io(m) => m.clone(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    message: String,
}

/// Result of a command that ran to completion.
pub struct Outcome {
    pub summary: String,
    pub pass: bool,
}

#[derive(Debug, Parser)]
#[command(name = "kraus", version, about = "Kraus representations between density matrices and along trajectories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Equality tolerance for every gate
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Eigen,
    Computational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    Precession,
    Dephasing,
    Depolarizing,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kraus operators taking RHO_A to RHO_B
    Connect {
        rho_a: PathBuf,
        rho_b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check completeness and reconstruction of a Kraus-set file
    Verify {
        kraus: PathBuf,
        rho_a: PathBuf,
        rho_b: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a Kraus set to a state
    Apply {
        kraus: PathBuf,
        rho: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Per-sample Kraus sets along a trajectory
    KrausTraj {
        trajectory: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// System-ancilla unitaries: one trajectory file, or a pair RHO_A RHO_B
    Dilate {
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "eigen")]
        basis: BasisArg,
        #[command(flatten)]
        common: Common,
    },
    /// Relative phases of the transport-aligned Kraus operators
    Phase {
        trajectory: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write a closed-form fixture trajectory
    Gen {
        #[arg(value_enum)]
        fixture: Fixture,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Polar angle of the precessing Bloch vector
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        omega: f64,
        /// Larger eigenvalue of the precessing state
        #[arg(long, default_value_t = 1.0)]
        purity: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Initial state for the depolarizing fixture
        #[arg(long)]
        rho0: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            return report_error(&CliError::Usage(msg.trim().to_string()), stderr);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(outcome) => {
            let _ = writeln!(stdout, "{}", outcome.summary);
            if outcome.pass {
                EXIT_OK
            } else {
                EXIT_GATE
            }
        }
        Err(e) => report_error(&e, stderr),
    }
}

pub fn run_from_env() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn report_error(e: &CliError, stderr: &mut impl Write) -> i32 {
    let line = ErrorLine {
        error: e.kind(),
        message: e.message(),
    };
    let _ = writeln!(stderr, "{}", serde_json::to_string(&line).expect("plain strings"));
    e.exit_code()
}
