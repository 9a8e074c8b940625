use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wva_lab::config::validate_config;
use wva_lab::experiment::{run_experiment, ExperimentError};

/// Weak value amplification numerical lab.
#[derive(Parser)]
#[command(name = "wva-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory (default: the config's `output` key, else `.`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recorded in the report; every experiment is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parameter sweeps.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and resolve a config file, then print it as JSON.
    Validate { config: PathBuf },
}

fn fail(e: &ExperimentError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Validate { config } => match validate_config(&config) {
            Ok(cfg) => {
                println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e.into()),
        },
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => {
            let cfg = match validate_config(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e.into()),
            };
            let out_dir = out
                .or_else(|| cfg.output.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            let run = || run_experiment(&cfg, &out_dir, seed);
            let result = match threads {
                Some(0) => {
                    eprintln!("error: --threads must be at least 1");
                    return ExitCode::from(2);
                }
                Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                    Ok(pool) => pool.install(run),
                    Err(e) => {
                        eprintln!("error: cannot start thread pool: {e}");
                        return ExitCode::from(4);
                    }
                },
                None => run(),
            };
            match result {
                Ok(report) => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
