//! `pushrank`: approximate spectral rankings by residual pushing.
//!
//! Exit codes: 0 success, 1 I/O, parse or data errors, 2 invalid flags,
//! 3 push limit reached (partial output written), 4 graph too large for the
//! dense oracle, 5 `compare` found the error above the claimed bound.

mod commands;
mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{HubsPrecomputeArgs, OracleArgs, PatchPrecomputeArgs, RankArgs};

#[derive(Debug, Parser)]
#[command(name = "pushrank", version, about = "Push-based spectral ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Approximate ranking by pushing residual mass
    Rank(RankArgs),
    /// Exact ranking by dense solve (small graphs only)
    Oracle(OracleArgs),
    /// Run `rank` and check its error against the oracle
    Compare(RankArgs),
    /// Hub vector files
    Hubs {
        #[command(subcommand)]
        command: HubsCommand,
    },
    /// Patch vector files
    Patch {
        #[command(subcommand)]
        command: PatchCommand,
    },
}

#[derive(Debug, Subcommand)]
enum HubsCommand {
    Precompute(HubsPrecomputeArgs),
}

#[derive(Debug, Subcommand)]
enum PatchCommand {
    Precompute(PatchPrecomputeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Rank(args) => commands::rank(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Compare(args) => commands::compare(args),
        Command::Hubs {
            command: HubsCommand::Precompute(args),
        } => commands::hubs_precompute(args),
        Command::Patch {
            command: PatchCommand::Precompute(args),
        } => commands::patch_precompute(args),
    };
    match outcome {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("pushrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
