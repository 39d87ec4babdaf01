//! `thurston` — CLI for Thurston's construction of pseudo-Anosov mapping
//! classes: intersection data → PSL(2,ℝ) representation → classification,
//! random walks on the twist group, and auditing of the closed-form
//! stretch-factor bounds.
//!
//! Exit codes (stable contract): 0 success, 2 input error, 3 mathematical
//! precondition violation, 4 measure validation error.

mod commands;
mod errors;
mod formats;
mod manifest;

use clap::Parser;

use errors::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "thurston",
    version,
    about = "Pseudo-Anosov mapping classes from Thurston's construction: \
             representation, classification, random walks, bounds"
)]
struct Cli {
    /// Worker threads for parallel sections (env: THURSTON_THREADS;
    /// default: all cores). Results do not depend on the thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: commands::Command,
}

fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if let Some(threads) = flag {
        if threads == 0 {
            return Err(CliError::Input("--threads must be positive".to_string()));
        }
        return Ok(Some(threads));
    }
    match std::env::var("THURSTON_THREADS") {
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|t| *t > 0)
            .map(Some)
            .ok_or_else(|| {
                CliError::Input(format!(
                    "THURSTON_THREADS must be a positive integer, got {raw:?}"
                ))
            }),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = resolve_threads(cli.threads)? {
        // Ignore the error from a pool that is already initialized.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    commands::dispatch(cli.command)
}

fn main() {
    let cli = Cli::parse();
    if let Err(error) = run(cli) {
        eprintln!("error: {error}");
        std::process::exit(error.exit_code());
    }
}
