use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Verdict,
    Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub experiment: String,
    pub case: String,
    pub name: String,
    pub kind: RecordKind,
    #[serde(with = "crate::grid::ext_real")]
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportBundle {
    pub experiment: String,
    pub seed: u64,
    pub records: Vec<Record>,
    /// Plot-ready `(x, value)` pairs, one file per key.
    pub series: BTreeMap<String, Vec<(f64, f64)>>,
}

impl ReportBundle {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self { experiment: experiment.into(), seed, ..Default::default() }
    }

    pub fn push_check(&mut self, case: &str, c: &Check) {
        let kind = if c.lower.is_some() || c.upper.is_some() { RecordKind::Verdict } else { RecordKind::Quantity };
        self.records.push(Record {
            experiment: self.experiment.clone(),
            case: case.into(),
            name: c.name.clone(),
            kind,
            value: c.value,
            lower: c.lower,
            upper: c.upper,
            tolerance: c.tolerance,
            pass: c.pass,
            provenance: c.provenance.clone(),
            seed: self.seed,
        });
    }

    pub fn push_report(&mut self, rep: &VerificationReport) {
        for c in &rep.checks {
            self.push_check(&rep.name, c);
        }
    }

    pub fn quantity(&mut self, case: &str, name: &str, value: f64, provenance: &str) {
        self.push_check(case, &Check::info(name, value, provenance));
    }

    pub fn verdict(&mut self, case: &str, c: Check) {
        self.push_check(case, &c);
    }

    pub fn add_series(&mut self, name: &str, points: Vec<(f64, f64)>) {
        self.series.insert(name.into(), points);
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.kind == RecordKind::Verdict)
    }

    /// True iff every verdict passes; a bundle without verdicts passes.
    pub fn all_pass(&self) -> bool {
        self.verdicts().all(|r| r.pass)
    }

    pub fn find(&self, case_prefix: &str, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.case.starts_with(case_prefix) && r.name == name)
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    /// Writes `results.jsonl`, `tables.csv` and `series/<name>.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir.join("series"))?;
        fs::write(dir.join("results.jsonl"), self.jsonl())?;
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        let mut t = csv::Writer::from_path(dir.join("tables.csv")).map_err(csv_err)?;
        t.write_record(["case", "name", "kind", "value", "lower", "upper", "tolerance", "pass", "provenance"]).map_err(csv_err)?;
        let opt = |v: Option<f64>| v.map(fmt).unwrap_or_default();
        for r in &self.records {
            let kind = match r.kind {
                RecordKind::Verdict => "verdict",
                RecordKind::Quantity => "quantity",
            };
            t.write_record([
                r.case.clone(),
                r.name.clone(),
                kind.into(),
                fmt(r.value),
                opt(r.lower),
                opt(r.upper),
                fmt(r.tolerance),
                if r.pass { "PASS".into() } else { "FAIL".into() },
                r.provenance.clone(),
            ])
            .map_err(csv_err)?;
        }
        t.flush()?;
        for (name, pts) in &self.series {
            let mut w = csv::Writer::from_path(dir.join("series").join(format!("{name}.csv"))).map_err(csv_err)?;
            w.write_record(["x", "value"]).map_err(csv_err)?;
            for (x, v) in pts {
                w.write_record([fmt(*x), fmt(*v)]).map_err(csv_err)?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}
