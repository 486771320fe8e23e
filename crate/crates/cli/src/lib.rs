//! Batch verification runner: configuration, suites and report rendering.

pub mod config;
pub mod report;
pub mod suites;

use rayon::prelude::*;

use config::{Command, RunConfig};
use report::{Report, Row, SuiteOutput};

type Suite = fn(&RunConfig) -> wco_lab::Result<SuiteOutput>;

fn selected(cmd: Command, dim: usize) -> Vec<(&'static str, Suite)> {
    let all: [(&'static str, Suite, Command); 5] = [
        ("identities", suites::identities, Command::Identities),
        ("norms", suites::norms, Command::Norms),
        ("pde", suites::pde, Command::Pde),
        ("opnorm", suites::opnorm, Command::Opnorm),
        ("adjoint", suites::adjoint, Command::Adjoint),
    ];
    all.into_iter()
        .filter(|&(name, _, c)| c == cmd || (cmd == Command::All && (name != "pde" || dim >= 3)))
        .map(|(name, f, _)| (name, f))
        .collect()
}

fn run_one(cfg: &RunConfig, name: &str, suite: Suite) -> SuiteOutput {
    suite(cfg).unwrap_or_else(|e| SuiteOutput { rows: vec![Row::error(name, "suite", e)], norm_table: Vec::new() })
}

/// Runs every suite selected by `cfg.cmd`; suite order in the report is fixed regardless of `cfg.parallel`.
pub fn run(cfg: &RunConfig) -> Report {
    let suites = selected(cfg.command, cfg.dim);
    let outputs: Vec<SuiteOutput> = if cfg.parallel {
        suites.par_iter().map(|&(name, f)| run_one(cfg, name, f)).collect()
    } else {
        suites.iter().map(|&(name, f)| run_one(cfg, name, f)).collect()
    };
    let mut out = SuiteOutput::default();
    for o in outputs {
        out.extend(o);
    }
    Report::new(cfg.clone(), out)
}
