use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybridyn::cli::{self, RunConfig};
use hybridyn::Error;

#[derive(Parser)]
#[command(name = "hybridyn", version, about = "Hybrid quantum-classical dynamics and Gaussian-hit measurement")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        dump_elements: bool,
    },
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// List scenarios and their keys.
    Scenarios,
}

fn load(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    cli::parse_config(&text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.cmd {
        Cmd::Run { config, out, seed, dump_elements } => load(&config).and_then(|cfg| {
            let cfg = cfg.with_overrides(seed, out, dump_elements);
            for w in &cfg.warnings {
                eprintln!("warning: {w}");
            }
            let report = cli::run(&cfg)?;
            println!("{}: wrote {} files to {}", cfg.scenario, report.files.len() + 1, cfg.output_dir.display());
            Ok(())
        }),
        Cmd::Validate { config } => load(&config).map(|cfg| {
            println!("ok: {} ({} defaults)", cfg.scenario, cfg.defaulted.len());
            for w in &cfg.warnings {
                println!("warning: {w}");
            }
        }),
        Cmd::Scenarios => {
            print!("{}", cli::describe_scenarios());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", cli::error_json(&e));
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
