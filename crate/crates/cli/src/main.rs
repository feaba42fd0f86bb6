use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match aspectprobe::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            eprint!("{e}");
            let summary = anyhow::anyhow!("{}", e.to_string().lines().next().unwrap_or("invalid arguments"));
            eprintln!("{}", aspectprobe::error_line("aspectprobe", &summary));
            return ExitCode::from(2);
        }
    };
    match aspectprobe::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", aspectprobe::error_line(cli.command.name(), &e));
            ExitCode::FAILURE
        }
    }
}
