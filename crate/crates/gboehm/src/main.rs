use std::process::ExitCode;

use clap::Parser;
use gboehm::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match gboehm::run(&cli) {
        Ok(outcome) if outcome.violations.is_empty() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
