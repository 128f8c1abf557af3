//! `su3-forge`: qutrit gate decompositions, audits and symmetry tools.

mod commands;
mod doc;
mod fail;
mod known;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CostArgs, DecomposeArgs, RandomArgs, StructconstArgs, SymmetryArgs, VerifyArgs};
use fail::{invalid, Failure};

#[derive(Parser)]
#[command(
    name = "su3-forge",
    version,
    about = "Decompose and audit single-qutrit gates"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a gate as diagonal/off-diagonal, Cartan or Givens form.
    Decompose(DecomposeArgs),
    /// Recompute the reference tables and identities.
    VerifyPaper(VerifyArgs),
    /// Pulse costs of a solution set.
    Cost(CostArgs),
    /// Commutant samples and relations between parameter sets.
    Symmetry(SymmetryArgs),
    /// Gell-Mann structure constants of one basis variant.
    Structconst(StructconstArgs),
    /// Haar-random unitaries.
    Random(RandomArgs),
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SU3_FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        invalid(format!(
            "SU3_FORGE_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| invalid(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let (doc, code) = match cli.command {
        Command::Decompose(a) => commands::decompose(a)?,
        Command::VerifyPaper(a) => commands::verify_paper(a)?,
        Command::Cost(a) => commands::cost(a)?,
        Command::Symmetry(a) => commands::symmetry(a)?,
        Command::Structconst(a) => commands::structconst(a)?,
        Command::Random(a) => commands::random(a)?,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    match cli.output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("su3-forge: {f}");
            ExitCode::from(f.code)
        }
    }
}
