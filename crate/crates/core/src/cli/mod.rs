//! The `soliton-forge` command line: argument parsing, validation and the
//! five subcommands. [`main`] returns the process exit code.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | configuration error |
//! | 3 | numerical failure, with the error name on stderr |
//! | 4 | `--verify` residual above `--tol` |

mod args;
mod commands;
mod config;

use clap::Parser;

pub use args::{Cli, Command, Opts};
pub use config::{
    format_complex, format_grid, parse_complex, parse_grid, AxisSpec, CommandKind, ConfigError, Equation, PolyColumns,
    Profile, RunConfig,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SOLITON_FORGE_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

fn split(command: Command) -> (CommandKind, Opts) {
    match command {
        Command::Qflow(o) => (CommandKind::Qflow, o),
        Command::Soliton(o) => (CommandKind::Soliton, o),
        Command::Unsystem(o) => (CommandKind::Unsystem, o),
        Command::Monopole(o) => (CommandKind::Monopole, o),
        Command::Verify(o) => (CommandKind::Verify, o),
    }
}

/// Parses `args` (program name first) into a validated run.
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| ConfigError(e.to_string()))?;
    let (kind, opts) = split(cli.command);
    RunConfig::from_opts(kind, &opts)
}

fn init_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // A pool that already exists (repeated calls in one process) is fine.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a validated configuration and writes its artifacts. Returns the
/// exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let outcome = match commands::run(cfg).and_then(|o| commands::write(cfg, &o).map(|_| o)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            return EXIT_NUMERIC;
        }
    };
    match outcome.checked {
        Some(r) if !(r <= cfg.tol) => {
            eprintln!("verification failed: residual {r:e} above tolerance {:e}", cfg.tol);
            EXIT_VERIFY
        }
        Some(r) => {
            println!("residual {r:e} within tolerance {:e}", cfg.tol);
            EXIT_OK
        }
        None => EXIT_OK,
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let (kind, opts) = split(cli.command);
    match RunConfig::from_opts(kind, &opts) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
