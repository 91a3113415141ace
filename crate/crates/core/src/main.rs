use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use anholonomy::cli::{parse_config, run, CliError, Format, Overrides, Subcommand};

/// Spectra, anholonomy invariants and subset-sum reports for hierarchical circuits.
#[derive(Parser)]
#[command(name = "anholonomy", version)]
struct Args {
    #[arg(value_enum)]
    command: Subcommand,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Largest qubit count for dense numeric routes.
    #[arg(long)]
    max_qubits: Option<usize>,
    /// Output path; `-` writes to standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

fn execute(args: &Args) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let overrides = Overrides {
        steps: args.steps,
        cycles: args.cycles,
        format: args.format,
        max_qubits: args.max_qubits,
    };
    let config = parse_config(&text)?.apply(&overrides)?;
    let out = run(args.command, &config)?;
    let written = if args.output == "-" {
        std::io::stdout().lock().write_all(&out.bytes)
    } else {
        std::fs::write(&args.output, &out.bytes)
    };
    written.map_err(|e| CliError::Io(format!("{}: {e}", args.output)))?;
    Ok(out.success)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
