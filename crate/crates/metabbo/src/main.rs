use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metabbo::workflow::{
    cmd_analyze, cmd_test, cmd_train, list_agents, list_suites, PlanOverrides,
};
use metabbo::Result;

/// Meta-black-box-optimization experiment runner.
///
/// `train` fits a meta-policy and writes snapshots, `test` replays a seeded
/// evaluation plan into a metadata file, and `analyze` turns metadata files
/// into performance, ranking, efficiency, and convergence tables.
#[derive(Parser)]
#[command(name = "metabbo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the configured agent; writes snapshots and a manifest.
    Train {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate an agent on the test split; writes metadata and a summary.
    Test {
        /// Experiment configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Policy snapshot to evaluate (required for `rl` / `ne` agents).
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Override the plan's scheduling mode (1-4).
        #[arg(long)]
        mode: Option<u8>,
        /// Override the number of runs per instance.
        #[arg(long)]
        runs: Option<usize>,
        /// Override the number of worker threads.
        #[arg(long)]
        workers: Option<usize>,
        /// Override the base seed of the plan.
        #[arg(long)]
        base_seed: Option<u64>,
    },
    /// Post-process metadata files into CSV tables.
    Analyze {
        /// Metadata from the training suite (repeatable; enables the
        /// train-vs-held-out robustness indicator).
        #[arg(long)]
        train: Vec<PathBuf>,
        /// Metadata from test suites.
        #[arg(long, num_args = 1..)]
        test: Vec<PathBuf>,
        /// Directory for the generated tables.
        #[arg(long)]
        out: PathBuf,
    },
    /// List the built-in problem suites.
    ListSuites,
    /// List the built-in agents.
    ListAgents,
}

fn run(command: Command) -> Result<String> {
    match command {
        Command::Train { config } => Ok(cmd_train(&config)?.message),
        Command::Test {
            config,
            snapshot,
            mode,
            runs,
            workers,
            base_seed,
        } => {
            let overrides = PlanOverrides {
                mode,
                runs,
                workers,
                base_seed,
            };
            Ok(cmd_test(&config, snapshot.as_deref(), &overrides)?.message)
        }
        Command::Analyze { train, test, out } => Ok(cmd_analyze(&train, &test, &out)?.message),
        Command::ListSuites => Ok(list_suites()),
        Command::ListAgents => Ok(list_agents()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse().command) {
        Ok(message) => {
            println!("{message}");
            ExitCode::SUCCESS
        }
        Err(error) => {
            let report = serde_json::json!({
                "kind": error.kind(),
                "error": error.to_string(),
            });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}
