//! `strongctx`: certificates and tables for strong contextuality of
//! two-qudit phase-function states.
//!
//! Exit codes: 0 strongly contextual (or success), 2 not strongly
//! contextual, 1 usage or input error, 3 a verification run found a failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CommonArgs, ContextSet, StrategyArg};

#[derive(Parser)]
#[command(name = "strongctx", version, about = "Exact strong-contextuality certificates for qudit magic states")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide strong contextuality of one state and emit a certificate.
    Analyze {
        #[arg(long)]
        d: u64,
        /// Phase polynomial in j, k (or x, y), e.g. "j^2*k + 2*j*k^2".
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, value_enum, default_value = "table1_first")]
        strategy: StrategyArg,
        /// Search the state exactly as given, without Clifford normalization.
        #[arg(long)]
        no_normalize: bool,
    },
    /// Check every state phi1 j^2 k + phi2 j k^2, (phi1, phi2) != (0, 0).
    #[command(name = "verify-theorem1")]
    VerifyTheorem1 {
        #[arg(long)]
        d: u64,
        /// Also test random quadratic parts added to each state.
        #[arg(long)]
        include_quadratics: bool,
        /// Random quadratic parts per state.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, value_enum, default_value = "table1_first")]
        strategy: StrategyArg,
    },
    /// Tabulate the empirical model of a state.
    Model {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        contexts: ContextSet,
    },
    /// List measurement contexts.
    Contexts {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Print only the number of contexts.
        #[arg(long)]
        count: bool,
        /// Only the d(d+1) family contexts (two qudits).
        #[arg(long)]
        table1: bool,
    },
    /// Contextual fraction of a state's empirical model.
    Cf {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "table1")]
        contexts: ContextSet,
    },
    /// Classify a one-variable polynomial of degree <= 3.
    Dickson {
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Randomized cross-check of the exact and numeric routes.
    Selftest {
        /// Random (state, context, outcome) triples per dimension.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    // Usage errors exit 1 so that 2 keeps its meaning for `analyze`.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Analyze { d, phi, strategy, no_normalize } => {
            commands::analyze(&cli.common, d, &phi, strategy.into(), !no_normalize)
        }
        Command::VerifyTheorem1 { d, include_quadratics, samples, strategy } => {
            commands::verify_theorem1(&cli.common, d, include_quadratics, samples, strategy.into())
        }
        Command::Model { d, phi, n, contexts } => commands::model(&cli.common, d, &phi, n, contexts),
        Command::Contexts { d, n, count, table1 } => commands::contexts(&cli.common, d, n, count, table1),
        Command::Cf { d, phi, n, contexts } => commands::cf(&cli.common, d, &phi, n, contexts),
        Command::Dickson { d, poly } => commands::dickson(&cli.common, d, &poly),
        Command::Selftest { samples } => commands::selftest(&cli.common, samples),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
