use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Format, RunConfig};

/// One verified check. `reference` names the acceptance criterion it backs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub module: String,
    pub check: String,
    pub reference: String,
    pub example_id: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Row {
    pub fn new(module: &str, check: &str, reference: &str, example_id: impl Into<String>) -> RowBuilder {
        RowBuilder(Row {
            module: module.into(),
            check: check.into(),
            reference: reference.into(),
            example_id: example_id.into(),
            lhs: String::new(),
            rhs: String::new(),
            pass: false,
        })
    }
}

pub struct RowBuilder(Row);

impl RowBuilder {
    /// Exact comparison of the rendered values.
    pub fn equal(self, lhs: impl ToString, rhs: impl ToString) -> Row {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        let pass = lhs == rhs;
        Row { lhs, rhs, pass, ..self.0 }
    }

    /// |lhs − rhs| ≤ tol, rendered with fixed precision.
    pub fn close(self, lhs: f64, rhs: f64, tol: f64) -> Row {
        let pass = (lhs - rhs).abs() <= tol;
        Row { lhs: num(lhs), rhs: num(rhs), pass, ..self.0 }
    }

    /// A predicate with explanatory sides.
    pub fn holds(self, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Row {
        Row { lhs: lhs.to_string(), rhs: rhs.to_string(), pass, ..self.0 }
    }

    /// A check that could not be evaluated.
    pub fn error(self, e: impl std::fmt::Display) -> Row {
        Row { lhs: format!("error: {e}"), rhs: String::new(), pass: false, ..self.0 }
    }
}

/// Fixed-precision rendering; −0 is printed as 0 so reports stay byte-stable.
pub fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'a str,
    seed: u64,
    config: &'a RunConfig,
}

#[derive(Serialize)]
struct Document<'a> {
    meta: Meta<'a>,
    rows: &'a [Row],
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, config: RunConfig, mut rows: Vec<Row>) -> Self {
        rows.sort_by(|a, b| (&a.module, &a.check, &a.example_id).cmp(&(&b.module, &b.check, &b.example_id)));
        Report { command: command.into(), config, rows }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            meta: Meta { version: env!("CARGO_PKG_VERSION"), seed: self.config.run.seed, config: &self.config },
            rows: &self.rows,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["module", "check", "reference", "example_id", "lhs", "rhs", "pass"])?;
        }
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes `<command>.json` or `<command>.csv` into `dir`.
    pub fn emit(&self, dir: &Path, format: Format) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let (name, body) = match format {
            Format::Json => (format!("{}.json", self.command), self.to_json()),
            Format::Csv => (format!("{}.csv", self.command), self.to_csv().map_err(std::io::Error::other)?),
        };
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = Report::new("eta", RunConfig::default(), Vec::new());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"], serde_json::json!([]));
        assert_eq!(v["meta"]["seed"], 1);
        assert!(r.passed());
    }

    #[test]
    fn single_passing_row() {
        let row = Row::new("eta", "closed_form", "criterion-1", "x").equal(3, 3);
        let r = Report::new("eta", RunConfig::default(), vec![row]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["rows"][0]["pass"], true);
        assert!(r.to_csv().unwrap().starts_with("module,check,reference,example_id,lhs,rhs,pass\n"));
    }

    #[test]
    fn rows_are_sorted() {
        let a = Row::new("b", "x", "", "1").equal(0, 0);
        let b = Row::new("a", "y", "", "2").equal(0, 1);
        let c = Row::new("a", "x", "", "3").equal(0, 0);
        let r = Report::new("all", RunConfig::default(), vec![a, b, c]);
        let ids: Vec<_> = r.rows.iter().map(|r| r.example_id.as_str()).collect();
        assert_eq!(ids, ["3", "2", "1"]);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn negative_zero_renders_as_zero() {
        assert_eq!(num(-0.0), "0.000000000");
        assert_eq!(num(-1e-12), "0.000000000");
        assert_eq!(num(-0.5), "-0.500000000");
    }
}
