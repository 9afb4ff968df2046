use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use germlab_cli::{limits_from_env, run_job_file, run_suite};

/// Diagrams, standard bases and flatness invariants of analytic germs.
///
/// Resource limits can be raised with GERMLAB_MAX_TERMS, GERMLAB_MAX_BASIS
/// and GERMLAB_MAX_PAIRS.
#[derive(Parser)]
#[command(name = "germlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one job file and print its report.
    Run {
        job: PathBuf,
        /// Also write the per-trial CSV table of an experiment here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run every job file in a directory.
    Suite {
        dir: PathBuf,
        /// Report directory, `<dir>/reports` by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = match limits_from_env() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("germlab: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.command {
        Cmd::Run { job, csv } => {
            let outcome = run_job_file(&job, &limits);
            print!("{}", outcome.to_pretty());
            if let Some(err) = outcome.report.get("error") {
                eprintln!("germlab: {}", err["message"].as_str().unwrap_or("error"));
            }
            if let (Some(path), Some(table)) = (csv, outcome.csv.as_deref()) {
                if let Err(e) = std::fs::write(&path, table) {
                    eprintln!("germlab: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Cmd::Suite { dir, out } => match run_suite(&dir, out.as_deref(), &limits) {
            Ok(summary) => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&summary).expect("plain data")
                );
                ExitCode::from(summary.exit_code() as u8)
            }
            Err(e) => {
                eprintln!("germlab: {e}");
                ExitCode::from(2)
            }
        },
    }
}
