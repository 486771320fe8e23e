use std::process::ExitCode;

use clap::Parser;

use wco_lab_cli::config::{Cli, RunConfig, SEED_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env_seed = std::env::var(SEED_ENV).ok();
    let cfg = match RunConfig::from_cli(&cli, env_seed.as_deref()) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("wco-lab: {msg}");
            return ExitCode::from(2);
        }
    };
    let report = wco_lab_cli::run(&cfg);
    let text = report.render();
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("wco-lab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
