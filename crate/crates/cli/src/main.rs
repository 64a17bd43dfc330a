//! `homforge`: compile homomorphism polynomials, evaluate and count with the
//! polynomial families, and check the hardness constructions.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 on usage or input
//! errors.

mod commands;
mod inputs;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use crate::commands::{Command, Outcome};
use crate::report::Format;

#[derive(Parser, Debug)]
#[command(name = "homforge", version, about)]
struct Cli {
    /// Report style.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

fn emit(out: Outcome, format: Format) -> Result<bool> {
    let mut stdout = std::io::stdout().lock();
    match out.artifact {
        Some((text, Some(path))) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            stdout.write_all(out.report.render(format).as_bytes())?;
        }
        Some((text, None)) => {
            stdout.write_all(out.report.render_commented(format).as_bytes())?;
            stdout.write_all(text.as_bytes())?;
        }
        None => stdout.write_all(out.report.render(format).as_bytes())?,
    }
    stdout.flush()?;
    Ok(out.verified)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.seed).and_then(|out| emit(out, cli.format)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
