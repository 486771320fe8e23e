//! Report rows and their JSON/CSV serialization.

use serde::{Serialize, Serializer};

use crate::config::{Command, Format, RunConfig};

fn finite_or_text<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// How a residual is compared with its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `residual < tolerance`.
    Below,
    /// `residual ≤ tolerance`.
    AtMost,
    /// `residual > tolerance` (failure witnesses).
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub suite: String,
    pub case: String,
    #[serde(serialize_with = "finite_or_text")]
    pub residual: f64,
    #[serde(serialize_with = "finite_or_text")]
    pub tolerance: f64,
    #[serde(skip)]
    pub check: Check,
    pub pass: bool,
}

impl Row {
    pub fn new(suite: &str, case: impl Into<String>, residual: f64, tolerance: f64, check: Check) -> Self {
        let pass = match check {
            Check::Below => residual < tolerance,
            Check::AtMost => residual <= tolerance,
            Check::Above => residual > tolerance,
        };
        Self { suite: suite.into(), case: case.into(), residual, tolerance, check, pass }
    }

    pub fn below(suite: &str, case: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(suite, case, residual, tolerance, Check::Below)
    }

    pub fn at_most(suite: &str, case: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(suite, case, residual, tolerance, Check::AtMost)
    }

    pub fn above(suite: &str, case: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(suite, case, residual, tolerance, Check::Above)
    }

    pub fn error(suite: &str, case: impl Into<String>, err: impl std::fmt::Display) -> Self {
        let mut row = Self::below(suite, format!("{}: error: {err}", case.into()), f64::NAN, 0.0);
        row.pass = false;
        row
    }
}

/// One line of the norm table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormRow {
    pub n: usize,
    #[serde(serialize_with = "finite_or_text")]
    pub p: f64,
    /// `|y|` for kernel norms, `|a|` for operator norms.
    #[serde(serialize_with = "finite_or_text")]
    pub radius: f64,
    #[serde(serialize_with = "finite_or_text")]
    pub closed_form: f64,
    #[serde(serialize_with = "finite_or_text")]
    pub quadrature_estimate: f64,
    #[serde(serialize_with = "finite_or_text")]
    pub rel_err: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteOutput {
    pub rows: Vec<Row>,
    pub norm_table: Vec<NormRow>,
}

impl SuiteOutput {
    pub fn extend(&mut self, other: SuiteOutput) {
        self.rows.extend(other.rows);
        self.norm_table.extend(other.norm_table);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub pass: bool,
    pub rows: Vec<Row>,
    pub norm_table: Vec<NormRow>,
}

impl Report {
    pub fn new(config: RunConfig, out: SuiteOutput) -> Self {
        Self { pass: out.passed(), config, rows: out.rows, norm_table: out.norm_table }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Norm table for `norms`/`opnorm`, the row table otherwise.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let written = if matches!(self.config.command, Command::Norms | Command::Opnorm) {
            w.write_record(["n", "p", "|a| or |y|", "closed_form", "quadrature_estimate", "rel_err"])
                .and_then(|_| self.norm_table.iter().try_for_each(|r| w.serialize(r)))
        } else {
            w.write_record(["suite", "case", "residual", "tolerance", "pass"])
                .and_then(|_| self.rows.iter().try_for_each(|r| w.serialize(r)))
        };
        written.expect("in-memory CSV write");
        String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV is UTF-8")
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_comparisons() {
        assert!(Row::below("s", "c", 1e-11, 1e-10).pass);
        assert!(!Row::below("s", "c", f64::NAN, 1e-10).pass);
        assert!(Row::at_most("s", "c", 0.0, 0.0).pass);
        assert!(Row::above("s", "c", 0.5, 1e-2).pass);
        assert!(!Row::error("s", "c", "boom").pass);
    }

    #[test]
    fn json_and_csv_shapes() {
        let mut out = SuiteOutput::default();
        out.rows.push(Row::below("identities", "n=3, jacobian", 1e-15, 1e-10));
        out.rows.push(Row::error("norms", "x", "bad"));
        out.norm_table.push(NormRow { n: 3, p: f64::INFINITY, radius: 0.5, closed_form: 1.0, quadrature_estimate: 1.0, rel_err: 0.0 });
        let report = Report::new(RunConfig::default(), out);
        assert!(!report.pass);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        let row = &json["rows"][0];
        assert_eq!(row["suite"], "identities");
        assert_eq!(row["pass"], true);
        assert_eq!(json["rows"][1]["residual"], "nan");
        assert_eq!(json["norm_table"][0]["p"], "inf");
        let csv = report.to_csv();
        assert!(csv.starts_with("suite,case,residual,tolerance,pass\n"));
        assert!(csv.contains("\"n=3, jacobian\""));
        let mut cfg = RunConfig::default();
        cfg.command = Command::Norms;
        let table = Report::new(cfg, SuiteOutput { rows: vec![], norm_table: report.norm_table.clone() }).to_csv();
        assert_eq!(table, "n,p,|a| or |y|,closed_form,quadrature_estimate,rel_err\n3,inf,0.5,1.0,1.0,0.0\n");
    }
}
