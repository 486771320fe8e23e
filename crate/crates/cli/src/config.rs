//! Command-line flags and the resolved run configuration.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

pub const SEED_ENV: &str = "WCO_LAB_SEED";
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Identities,
    Norms,
    Pde,
    Opnorm,
    Adjoint,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadKind {
    Mc,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Verification suites for weighted composition operators on harmonic Hardy spaces.
#[derive(Debug, Parser)]
#[command(name = "wco-lab", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "all")]
    pub cmd: Command,
    /// Dimension n ≥ 2.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Exponent p ∈ [1, ∞] ("inf" accepted); omitted means the grid {1, 2, 4}.
    #[arg(long, value_parser = parse_exponent)]
    pub p: Option<f64>,
    /// Möbius center a = φ⁻¹(0) as "x1,x2,..."; omitted means a |a| grid along a fixed direction.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    pub a: Option<::std::vec::Vec<f64>>,
    /// Rotation as 1-based Givens planes "i,j,theta;...".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_givens, default_value = "")]
    pub rot: Givens,
    /// Constant C in ψ = C|Dφ|^((n−2)/2).
    #[arg(long, default_value_t = 1.0)]
    pub psi_const: f64,
    /// Boundary data for the adjoint suite, e.g. "1 + 2*z1 - 0.5*P(0.1,0,0)".
    #[arg(long)]
    pub boundary: Option<String>,
    /// Operator record (TOML) replacing --a/--rot/--psi-const where applicable.
    #[arg(long)]
    pub operator: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "product")]
    pub quad: QuadKind,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Product rule order.
    #[arg(long, default_value_t = 48)]
    pub order: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Report path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Evaluate independent cases on the rayon pool.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Givens(pub Vec<(usize, usize, f64)>);

/// Everything a suite needs; echoed into the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dim: usize,
    pub p: Option<f64>,
    pub a: Option<Vec<f64>>,
    pub rot: Givens,
    pub psi_const: f64,
    pub boundary: Option<String>,
    #[serde(skip)]
    pub operator: Option<String>,
    pub quad: QuadKind,
    pub samples: usize,
    pub order: usize,
    pub seed: u64,
    pub tol_scale: f64,
    pub format: Format,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::All,
            dim: 3,
            p: None,
            a: None,
            rot: Givens::default(),
            psi_const: 1.0,
            boundary: None,
            operator: None,
            quad: QuadKind::Product,
            samples: 1_000_000,
            order: 48,
            seed: DEFAULT_SEED,
            tol_scale: 1.0,
            format: Format::Json,
            parallel: false,
        }
    }
}

impl RunConfig {
    /// Resolves flags; `seed_env` (the value of `WCO_LAB_SEED`, if set) overrides `--seed`.
    pub fn from_cli(cli: &Cli, seed_env: Option<&str>) -> Result<Self, String> {
        let seed = match seed_env {
            Some(s) => s.trim().parse::<u64>().map_err(|e| format!("{SEED_ENV}={s:?}: {e}"))?,
            None => cli.seed,
        };
        let operator = match &cli.operator {
            Some(path) => Some(std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?),
            None => None,
        };
        let cfg = Self {
            command: cli.cmd,
            dim: cli.dim,
            p: cli.p,
            a: cli.a.clone(),
            rot: cli.rot.clone(),
            psi_const: cli.psi_const,
            boundary: cli.boundary.clone(),
            operator,
            quad: cli.quad,
            samples: cli.samples,
            order: cli.order,
            seed,
            tol_scale: cli.tol_scale,
            format: cli.format,
            parallel: cli.parallel,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.dim < 2 {
            return Err(format!("--dim must be at least 2, got {}", self.dim));
        }
        if let Some(p) = self.p {
            if !(p >= 1.0) {
                return Err(format!("--p must be at least 1, got {p}"));
            }
        }
        if let Some(a) = &self.a {
            if a.len() != self.dim {
                return Err(format!("--a has {} components, --dim is {}", a.len(), self.dim));
            }
            let r = a.iter().map(|c| c * c).sum::<f64>().sqrt();
            if !(r < 1.0) {
                return Err(format!("--a must lie in the open unit ball, |a| = {r}"));
            }
        }
        for &(i, j, _) in &self.rot.0 {
            if i == 0 || j == 0 || i > self.dim || j > self.dim || i == j {
                return Err(format!("--rot plane ({i},{j}) invalid in dimension {}", self.dim));
            }
        }
        if !(self.tol_scale > 0.0) {
            return Err("--tol-scale must be positive".into());
        }
        if self.samples == 0 || self.order == 0 {
            return Err("--samples and --order must be positive".into());
        }
        Ok(())
    }

    /// Scaled tolerance.
    pub fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| e.to_string()),
    }
}

fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|c| c.trim().parse::<f64>().map_err(|e| format!("{c:?}: {e}"))).collect()
}

fn parse_givens(s: &str) -> Result<Givens, String> {
    let mut out = Vec::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(',').map(str::trim).collect();
        let [i, j, t] = fields[..] else {
            return Err(format!("expected i,j,theta in {part:?}"));
        };
        let i = i.parse::<usize>().map_err(|e| format!("{i:?}: {e}"))?;
        let j = j.parse::<usize>().map_err(|e| format!("{j:?}: {e}"))?;
        let t = t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"))?;
        out.push((i, j, t));
    }
    Ok(Givens(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("wco-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn parses_flags() {
        let cli = parse(&["--cmd", "opnorm", "--dim", "4", "--p", "inf", "--a", "-0.1,0.2,0,0", "--rot", "1,2,0.5; 3,4,-1"]);
        let cfg = RunConfig::from_cli(&cli, None).unwrap();
        assert_eq!(cfg.command, Command::Opnorm);
        assert!(cfg.p.unwrap().is_infinite());
        assert_eq!(cfg.a, Some(vec![-0.1, 0.2, 0.0, 0.0]));
        assert_eq!(cfg.rot.0, vec![(1, 2, 0.5), (3, 4, -1.0)]);
    }

    #[test]
    fn env_seed_overrides_flag() {
        let cli = parse(&["--seed", "5"]);
        assert_eq!(RunConfig::from_cli(&cli, None).unwrap().seed, 5);
        assert_eq!(RunConfig::from_cli(&cli, Some("77")).unwrap().seed, 77);
        assert!(RunConfig::from_cli(&cli, Some("x")).is_err());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(RunConfig::from_cli(&parse(&["--a", "0.9,0.9,0"]), None).is_err());
        assert!(RunConfig::from_cli(&parse(&["--a", "0.1,0"]), None).is_err());
        assert!(RunConfig::from_cli(&parse(&["--rot", "1,4,0.3"]), None).is_err());
        assert!(RunConfig::from_cli(&parse(&["--dim", "1"]), None).is_err());
        assert!(Cli::try_parse_from(["wco-lab", "--rot", "1,2"]).is_err());
    }
}
