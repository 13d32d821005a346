mod config;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use config::{Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();

    let cfg = match (&cli.config, cli.command) {
        (Some(path), None) => match std::fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|t| Ok(serde_json::from_str::<RunConfig>(&t)?))
        {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: cannot load config {}: {e:#}", path.display());
                return ExitCode::from(2);
            }
        },
        (None, Some(command)) => RunConfig { command, common: cli.common },
        (Some(_), Some(_)) => {
            eprintln!("error: --config replaces the subcommand; give one or the other\n");
            let _ = Cli::command().print_help();
            return ExitCode::from(2);
        }
        (None, None) => {
            let _ = Cli::command().print_help();
            return ExitCode::from(2);
        }
    };

    match run::execute(&cfg) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(r.select(cfg.common.out).as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
