//! `newtpot`: eigenvalues of the logarithmic and Newtonian potential
//! operators from the command line.
//!
//! ```text
//! newtpot disc-spectrum --a 0.1 --kmax 3 --jmax 3 --out spec.csv
//! newtpot psi-samples --a-log -20 --xmax 12 --points 1200
//! newtpot monotonicity --inner square.json --outer disc.json --modes 8
//! newtpot run --config job.json
//! ```

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::error::{CliError, CliResult};

const THREADS_VAR: &str = "NEWTPOT_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot start {n} worker threads: {e}")))
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match configure_threads().and_then(|_| commands::execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
