use std::process::ExitCode;

use clap::{Parser, Subcommand};
use zitterkit::commands::{self, Command};
use zitterkit::config::{Overrides, RunConfig};
use zitterkit::{output, Failure, EXIT_CONFIG, EXIT_OK};

#[derive(Parser)]
#[command(name = "zitterkit", version, about = "Trembling-motion studies of free relativistic particles")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the matrix-identity suite and report per-check residuals
    CheckAlgebra(Overrides),
    /// Eigenvalues of H over a momentum sweep
    Spectrum(Overrides),
    /// Closed-form and brute-force v(t), Δr(t) for one matrix entry
    EvolveOperator(Overrides),
    /// Wave-packet expectation values and a frequency/drift summary
    EvolvePacket(Overrides),
    /// FW transform, its inverse and the transformed operators
    Transform(Overrides),
}

fn execute(command: Command, flags: &Overrides) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(flags)?;
    let outcome = commands::run(command, &cfg)?;
    output::emit(&outcome.document, &cfg)?;
    if outcome.failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(outcome.failed))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK });
        }
    };
    let (command, flags) = match &cli.command {
        Sub::CheckAlgebra(f) => (Command::CheckAlgebra, f),
        Sub::Spectrum(f) => (Command::Spectrum, f),
        Sub::EvolveOperator(f) => (Command::EvolveOperator, f),
        Sub::EvolvePacket(f) => (Command::EvolvePacket, f),
        Sub::Transform(f) => (Command::Transform, f),
    };
    match execute(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("zitterkit {}: {failure}", command.name());
            ExitCode::from(failure.exit_code())
        }
    }
}
