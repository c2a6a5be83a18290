use std::fs;

use serde::Serialize;

use dwlab_core::io::{fmt17, to_json17};
use dwlab_core::Result;

use crate::config::{Format, OutputArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// Generic result row used by `space` and `quadcheck`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub alpha: Option<f64>,
    pub item: String,
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub status: Status,
    pub note: String,
}

pub const CHECK_COLUMNS: [&str; 7] = ["check", "alpha", "item", "value", "bound", "status", "note"];

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

impl CheckRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.check.to_string(),
            opt(self.alpha),
            self.item.clone(),
            opt(self.value),
            opt(self.bound),
            self.status.name().to_string(),
            self.note.clone(),
        ]
    }
}

/// A finished command: its verdict and both renderings.
pub struct Outcome {
    pub pass: bool,
    pub json: String,
    pub csv: String,
}

impl Outcome {
    pub fn new<T: Serialize>(pass: bool, report: &T, header: &[&str], rows: Vec<Vec<String>>) -> Result<Self> {
        Ok(Outcome { pass, json: to_json17(report)?, csv: csv_text(header, rows)? })
    }

    pub fn emit(&self, out: &OutputArgs) -> Result<()> {
        let text = match out.format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        };
        match &out.out {
            Some(p) => fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

pub fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| dwlab_core::DwError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| dwlab_core::DwError::Io(e.to_string()))
}
