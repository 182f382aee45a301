//! Command-line front end: `simulate`, `spectrum`, `match`, `decay` and
//! `tables`.
//!
//! Exit codes: `0` success, `2` configuration error (bad flags, config file,
//! input or output location), `3` numerical failure.

mod commands;
mod config;
mod tables;

use clap::Parser;

use config::{resolve, Cli, FileConfig, OUT_ENV};

/// Failures of the front end, classified by exit code.
#[derive(thiserror::Error, Debug)]
pub enum CliError {
    /// Invalid configuration (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// Input/output failure (exit code 2).
    #[error("i/o error: {0}")]
    Io(String),
    /// Numerical failure (exit code 3).
    #[error("numerical failure: {0}")]
    Numerics(String),
}

impl CliError {
    /// Process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}

impl From<burgers_metastab::Error> for CliError {
    fn from(e: burgers_metastab::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerics(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let env_out = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(Into::into);
    let resolved = resolve(&cli.command, &cli.common, &file, env_out)?;
    if cli.common.show_config {
        let text = serde_json::to_string_pretty(&resolved).map_err(|e| CliError::Config(e.to_string()))?;
        println!("{text}");
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolved.jobs())
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} worker threads: {e}", resolved.jobs())))?;
    let written = pool.install(|| commands::run(&resolved))?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
