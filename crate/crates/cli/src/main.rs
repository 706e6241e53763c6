mod commands;
mod input;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use ancilla_core::{Error, Tolerances};
use clap::{Args, Parser, Subcommand};

/// Physicality of ancilla operators in system-ancilla unitary models.
#[derive(Parser)]
#[command(name = "ancilla", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Random states drawn when sampling S_B.
    #[arg(long, global = true, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Negative-eigenvalue slack for PSD checks.
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut tol = Tolerances::default();
        if let Some(r) = self.tol_rank {
            tol.rank_tol = r;
        }
        if let Some(p) = self.tol_psd {
            tol.psd_tol = p;
        }
        tol.validate().map_err(CliError::from_core)?;
        Ok(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt data, physicality report and tomography verdict.
    Analyze {
        /// Unitary JSON file or `gallery:name?k=v&...`.
        input: String,
    },
    /// Unphysical ancilla operator with a completely positive map.
    Witness {
        input: String,
        /// State `[[re, im], ...]` to build the witness from; searched for when absent.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Complete positivity and trace preservation of the induced map.
    CheckCp {
        input: String,
        /// Ancilla operator as matrix JSON.
        #[arg(long)]
        sigma: String,
    },
    /// Whether the induced map determines the ancilla operator.
    Tomography {
        input: String,
        /// Ancilla operator to round-trip through reconstruction.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Emit a gallery unitary with its expected facts.
    Gallery {
        name: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Run every gallery entry against its expected facts.
    Regress,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn precondition(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }

    pub fn from_core(e: Error) -> Self {
        let code = match &e {
            Error::NotUnitary { .. } => 3,
            Error::NotInSb { .. }
            | Error::NotCompletelyPositive { .. }
            | Error::NotFiducial(_)
            | Error::RankThree(_) => 4,
            Error::Inconsistent(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { input } => commands::analyze(input, &cli.common),
        Command::Witness { input, phi } => commands::witness(input, phi.as_deref(), &cli.common),
        Command::CheckCp { input, sigma } => commands::check_cp(input, sigma, &cli.common),
        Command::Tomography { input, sigma } => {
            commands::tomography(input, sigma.as_deref(), &cli.common)
        }
        Command::Gallery { name, params } => commands::gallery(name, params, &cli.common),
        Command::Regress => commands::regress(&cli.common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
