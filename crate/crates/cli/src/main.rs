use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use galois_core::lab::{LabOptions, LipschitzTarget};
use galois_solve::{cmd_apply, cmd_lab, cmd_solve, parse_thread_cap, CliError, Direction, Outcome, THREADS_ENV};

/// Solve Bf = g for kernels built from scalar dual Galois connections.
#[derive(Parser)]
#[command(name = "galois-solve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide existence and uniqueness for a problem file.
    Solve {
        file: PathBuf,
        /// Require Bf = g only at these x labels.
        #[arg(long, value_delimiter = ',')]
        x_restrict: Option<Vec<String>>,
        /// Print the JSON report.
        #[arg(long)]
        json: bool,
        /// Tie tolerance for maximizers and for Bf = g.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Apply B to f or B° to g with the file's kernel.
    Apply {
        file: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        direction: DirectionArg,
        /// f on Y: JSON, comma-separated values or a JSON file.
        #[arg(long)]
        f: Option<String>,
        /// g on X: JSON, comma-separated values or a JSON file; defaults to the file's g.
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run a grid experiment.
    Lab {
        #[arg(value_enum)]
        name: LabName,
        #[arg(long)]
        json: bool,
        /// Dump the sampled functions to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Quadratic kernel parameter.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        /// Target of the Lipschitz experiment.
        #[arg(long, value_enum, default_value_t = GArg::AbsHalf)]
        g: GArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    #[value(name = "B")]
    B,
    #[value(name = "Bstar")]
    Bstar,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabName {
    Fenchel,
    Quadratic,
    Lipschitz,
    WeightedPower,
    Exgeom,
}

impl LabName {
    fn as_str(self) -> &'static str {
        match self {
            LabName::Fenchel => "fenchel",
            LabName::Quadratic => "quadratic",
            LabName::Lipschitz => "lipschitz",
            LabName::WeightedPower => "weighted-power",
            LabName::Exgeom => "exgeom",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GArg {
    #[value(name = "abs_half", alias = "abs-half")]
    AbsHalf,
    #[value(name = "sin_half", alias = "sin-half")]
    SinHalf,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n = parse_thread_cap(&raw)?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Solve { file, x_restrict, json, tol } => cmd_solve(&file, x_restrict.as_deref(), json, tol),
        Command::Apply { file, direction, f, g, json } => {
            let direction = match direction {
                DirectionArg::B => Direction::B,
                DirectionArg::Bstar => Direction::Bstar,
            };
            cmd_apply(&file, direction, f.as_deref(), g.as_deref(), json)
        }
        Command::Lab { name, json, csv, a, g } => {
            let lipschitz = match g {
                GArg::AbsHalf => LipschitzTarget::AbsHalf,
                GArg::SinHalf => LipschitzTarget::SinHalf,
            };
            cmd_lab(name.as_str(), &LabOptions { a, lipschitz }, json, csv.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
