//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

use std::process::{Command as Process, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wco_lab::geometry::BallMoebius;
use wco_lab::linalg::{Matrix, Vector};
use wco_lab::wco::{essential_norm_formula, norm_formula};
use wco_lab::Error;
use wco_lab_cli::config::{Command, QuadKind, RunConfig, SEED_ENV};
use wco_lab_cli::report::{Report, Row};
use wco_lab_cli::run;

fn config(command: Command, dim: usize) -> RunConfig {
    RunConfig { command, dim, ..RunConfig::default() }
}

fn timed(cfg: &RunConfig) -> (Report, Duration) {
    let t = Instant::now();
    let r = run(cfg);
    (r, t.elapsed())
}

fn select<'a>(r: &'a Report, pat: &str) -> Vec<&'a Row> {
    r.rows.iter().filter(|row| row.case.contains(pat)).collect()
}

fn all_pass(rows: &[&Row]) -> bool {
    !rows.is_empty() && rows.iter().all(|r| r.pass)
}

fn failures(rows: &[&Row]) -> String {
    rows.iter().filter(|r| !r.pass).map(|r| format!(" [{}: {}]", r.case, r.residual)).collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn identities() -> Outcome {
    let mut total = Duration::ZERO;
    let mut rows = Vec::new();
    for n in 2..=5 {
        let (r, t) = timed(&config(Command::Identities, n));
        total += t;
        rows.extend(r.rows);
    }
    let refs: Vec<&Row> = rows.iter().collect();
    let pass = all_pass(&refs) && refs.len() == 4 * 4 * 5 && total < Duration::from_secs(5);
    Outcome { pass, detail: format!("{} rows, {:.2?}{}", refs.len(), total, failures(&refs)) }
}

fn kernel_norms(n3: &Report, t3: Duration) -> Outcome {
    let (n4, t4) = timed(&RunConfig { quad: QuadKind::Mc, samples: 1_000_000, ..config(Command::Norms, 4) });
    let mut rows = select(n3, "||P_y||");
    rows.extend(select(&n4, "||P_y||"));
    let term = select(n3, "terminating");
    let pass = all_pass(&rows) && rows.len() == 2 * 3 * 6 && all_pass(&term) && t3 + t4 < Duration::from_secs(60);
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Outcome {
        pass,
        detail: format!("max rel err {worst:.2e}, terminating {:.1e}, {:.2?}{}", term[0].residual, t3 + t4, failures(&rows)),
    }
}

fn riesz(n3: &Report) -> Outcome {
    let rows = select(n3, "sphere integral");
    let ln3 = select(n3, "ln 3");
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rows) && rows.len() == 13 && all_pass(&ln3),
        detail: format!("{} rows, max residual {worst:.2e}{}", rows.len(), failures(&rows)),
    }
}

fn change_of_variables(n3: &Report) -> Outcome {
    let rows = select(n3, "change of variables");
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rows) && rows.len() == 15,
        detail: format!("{} rows, max residual {worst:.2e}{}", rows.len(), failures(&rows)),
    }
}

fn pde() -> Outcome {
    let (r, t) = timed(&config(Command::Pde, 3));
    let rows: Vec<&Row> = r.rows.iter().collect();
    let positive = select(&r, "laplacian psi").len();
    let witnesses = select(&r, "witness").len();
    let reflections = select(&r, "closed-form derivatives").len();
    Outcome {
        pass: all_pass(&rows) && positive == 6 && witnesses == 6 && reflections == 2,
        detail: format!("{positive} positive, {} witnesses, {reflections} reflections, {t:.2?}{}", witnesses / 2, failures(&rows)),
    }
}

fn sandwich(o3: &Report, t3: Duration) -> Outcome {
    let (o4, t4) = timed(&config(Command::Opnorm, 4));
    let mut rows = Vec::new();
    for r in [o3, &o4] {
        rows.extend(select(r, "lower curve"));
        rows.extend(select(r, "upper sweep"));
        rows.extend(select(r, "sqrt 3"));
    }
    let spot = select(o3, "lower curve vs sqrt 3");
    let total = t3 + t4;
    let pass = all_pass(&rows) && rows.len() == 2 * 9 * 3 + 3 && spot.len() == 1 && total < Duration::from_secs(120);
    Outcome { pass, detail: format!("{} rows, spot rel err {:.1e}, {total:.2?}{}", rows.len(), spot[0].residual, failures(&rows)) }
}

fn essential(o3: &Report) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let p = 1.0 + 10f64.powf(rng.random_range(-3.0..2.0));
        let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let a = Vector::from_vec(dir).normalized().expect("nonzero").scaled(rng.random_range(0.0..0.99));
        let m = BallMoebius::new(Matrix::identity(n), a).expect("center in ball");
        if essential_norm_formula(&m, p) != norm_formula(&m, p) {
            mismatches += 1;
        }
    }
    let m = BallMoebius::from_center(Vector::from_vec(vec![0.5, 0.0, 0.0])).expect("center in ball");
    let rejected = [1.0, f64::INFINITY].iter().all(|&p| matches!(essential_norm_formula(&m, p), Err(Error::OutOfScope(_))));
    let probe = select(o3, "sup_(|x|<=0.5)");
    let pass = mismatches == 0 && rejected && all_pass(&probe) && probe.len() == 3;
    let last = select(o3, "at |y|=0.999");
    Outcome {
        pass,
        detail: format!("{mismatches} mismatches, endpoints rejected: {rejected}, probe at 0.999: {:.2e}", last[0].residual),
    }
}

fn adjoint() -> Outcome {
    let (r, t) = timed(&config(Command::Adjoint, 3));
    let rows: Vec<&Row> = r.rows.iter().collect();
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Outcome {
        pass: all_pass(&rows) && rows.len() == 2 * 2 * 3 * 2,
        detail: format!("{} rows, max rel err {worst:.2e}, {t:.2?}{}", rows.len(), failures(&rows)),
    }
}

fn spawn_report(dir: &std::path::Path, name: &str) -> Vec<u8> {
    let out = dir.join(name);
    let status = Process::new(env!("CARGO_BIN_EXE_wco-lab"))
        .args(["--cmd", "all", "--dim", "3", "--order", "24", "--out"])
        .arg(&out)
        .env(SEED_ENV, "99")
        .status()
        .expect("binary runs");
    assert!(status.code().is_some());
    std::fs::read(out).expect("report written")
}

fn determinism() -> Outcome {
    let cfg = RunConfig { order: 24, seed: 99, ..config(Command::All, 3) };
    let lib_same = run(&cfg).to_json() == run(&cfg).to_json();
    let dir = std::env::temp_dir().join(format!("wco-lab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let a = spawn_report(&dir, "a.json");
    let b = spawn_report(&dir, "b.json");
    let _ = std::fs::remove_dir_all(&dir);
    let bin_same = a == b;
    let matches_lib = a == run(&cfg).to_json().into_bytes();
    Outcome {
        pass: lib_same && bin_same && matches_lib,
        detail: format!("library runs identical: {lib_same}, binary runs identical: {bin_same}, binary = library: {matches_lib}"),
    }
}

fn main() -> ExitCode {
    let (n3, tn3) = timed(&config(Command::Norms, 3));
    let (o3, to3) = timed(&config(Command::Opnorm, 3));
    let criteria: [(&str, Box<dyn Fn() -> Outcome>); 9] = [
        ("Moebius identities and Jacobian bounds", Box::new(identities)),
        ("Poisson kernel norms vs quadrature", Box::new(|| kernel_norms(&n3, tn3))),
        ("sphere integral of |x-z|^(-2s)", Box::new(|| riesz(&n3))),
        ("change of variables on the sphere", Box::new(|| change_of_variables(&n3))),
        ("harmonicity-preservation system", Box::new(pde)),
        ("operator norm sandwich", Box::new(|| sandwich(&o3, to3))),
        ("essential norm and weak-null probe", Box::new(|| essential(&o3))),
        ("adjoint and duality", Box::new(adjoint)),
        ("byte-identical reports", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {} {}: {} ({})", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
