//! Command-line front end: generation, statistics, evaluation, review
//! round-trips and AddDiff sweeps.

pub mod args;
pub mod generate;
pub mod io;
pub mod review;
pub mod scoring;

use anyhow::Result;

pub use args::{Cli, Command};

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Stats(_) => "stats",
            Command::Evaluate(_) => "evaluate",
            Command::ReviewExport(_) => "review-export",
            Command::ReviewImport(_) => "review-import",
            Command::Sweep(_) => "sweep",
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => generate::run(a),
        Command::Stats(a) => scoring::run_stats(a),
        Command::Evaluate(a) => scoring::run_evaluate(a),
        Command::ReviewExport(a) => review::run_export(a),
        Command::ReviewImport(a) => review::run_import(a),
        Command::Sweep(a) => scoring::run_sweep(a),
    }
}

/// One JSON line describing a failed command.
pub fn error_line(command: &str, err: &anyhow::Error) -> String {
    let message = format!("{err:#}").replace('\n', " ");
    serde_json::json!({ "status": "error", "command": command, "message": message }).to_string()
}
