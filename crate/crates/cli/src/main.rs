use std::process::ExitCode;

use catalytic_cli::verify::require_pass;
use catalytic_cli::{cmd_discriminate, cmd_simulate, cmd_verify, record, CliResult, ConfigArgs, VerifyOptions};
use clap::{Parser, Subcommand};

/// Coherent energy-ladder reservoir simulator.
///
/// Exit status: 0 on success, 1 when an invariant fails or output cannot be
/// written, 2 for an invalid configuration.
#[derive(Parser)]
#[command(name = "catalytic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep (L, k) and write one record per grid point
    Simulate(ConfigArgs),
    /// Run every verification suite and report worst deviations
    Verify {
        #[command(flatten)]
        args: ConfigArgs,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Compare phase discrimination with ideal copies, the reservoir, and the prepared systems
    Discriminate(ConfigArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = args.resolve()?;
            let rows = cmd_simulate(&cfg)?;
            record::emit(&rows, cfg.format, cfg.out.as_deref())
        }
        Command::Discriminate(args) => {
            let cfg = args.resolve()?;
            let rows = cmd_discriminate(&cfg)?;
            record::emit(&rows, cfg.format, cfg.out.as_deref())
        }
        Command::Verify { args, inject_fault } => {
            let cfg = args.resolve()?;
            let report = cmd_verify(&cfg, VerifyOptions { inject_fault })?;
            print!("{}", report.render());
            if let Some(path) = cfg.out.as_deref() {
                record::emit(&report.checks, cfg.format, Some(path))?;
            }
            require_pass(&report)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
