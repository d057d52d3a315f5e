//! Library side of the `galois-solve` command: problem files, reports and
//! the subcommands.

pub mod commands;
pub mod error;
pub mod problem_file;
pub mod report;

pub use commands::{cmd_apply, cmd_lab, cmd_solve, parse_values, Direction, Outcome};
pub use error::{CliError, EXIT_FAILURE, EXIT_NO_SOLUTION, EXIT_VALIDATION};
pub use problem_file::{KernelSpec, ProblemFile, Values};
pub use report::{fmt_sig, render_human, ReportFile};

/// Thread cap read from the environment.
pub const THREADS_ENV: &str = "GALOIS_SOLVE_THREADS";

/// Parses a `GALOIS_SOLVE_THREADS` value.
pub fn parse_thread_cap(raw: &str) -> Result<usize, CliError> {
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))),
    }
}
