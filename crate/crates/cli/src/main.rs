mod args;
mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

#[derive(Debug)]
pub enum CliError {
    /// Inputs parsed but held nothing to work on.
    NoData(String),
    Config(String),
    Io { path: PathBuf, source: std::io::Error },
    Format(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::NoData(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Format(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::NoData(m) => write!(f, "no data: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Format(m) => write!(f, "format error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = match cli.command {
        Command::Positions => commands::positions(out.as_deref()),
        Command::Ingest(a) => commands::ingest(&a, &out_dir(out)),
        Command::Dataset(a) => commands::dataset(&a, cli.seed, &out_dir(out)),
        Command::Eval(a) => commands::eval(&a, cli.seed, &out_dir(out)),
        Command::Themes(a) => commands::themes(&a, &out_dir(out)),
        Command::Synth(a) => commands::synth(&a, cli.seed, &out_dir(out)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("c960: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn out_dir(out: Option<PathBuf>) -> PathBuf {
    out.unwrap_or_else(|| PathBuf::from("c960-out"))
}
