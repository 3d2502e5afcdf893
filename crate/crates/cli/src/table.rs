//! Sweep and spectrum tables with CSV and JSON serialization.
//!
//! Floats are written as the shortest decimal that parses back to the same
//! value, so `parse(emit(t)) == t`. Failed points keep their row with empty
//! numeric fields and `status = error:<stage>:<code>`.

use std::cmp::Ordering;

use isocycle_core::{CycleError, CycleResult, Knob, LevelPair, Method};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SWEEP_HEADER: &str = "varied,method,xi1,alpha,xi2,xi3,xi4,q_in,q_out,w_total,eta,dsc_flag,status";
pub const SPECTRUM_HEADER: &str = "block,varied,method,xi,e0,e1,gap,n_used,converged";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unexpected header `{found}` (expected `{expected}`)")]
    Header { expected: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub varied: String,
    pub method: String,
    pub xi1: f64,
    pub alpha: f64,
    pub xi2: Option<f64>,
    pub xi3: Option<f64>,
    pub xi4: Option<f64>,
    pub q_in: Option<f64>,
    pub q_out: Option<f64>,
    pub w_total: Option<f64>,
    pub eta: Option<f64>,
    pub dsc_flag: Option<bool>,
    pub status: String,
}

impl SweepRow {
    pub fn from_outcome(
        varied: Knob,
        method: Method,
        xi1: f64,
        alpha: f64,
        outcome: &Result<CycleResult, CycleError>,
    ) -> Self {
        match outcome {
            Ok(r) => SweepRow {
                varied: varied.label().into(),
                method: method.label().into(),
                xi1,
                alpha,
                xi2: Some(r.xi[1]),
                xi3: Some(r.xi[2]),
                xi4: Some(r.xi[3]),
                q_in: Some(r.q_in),
                q_out: Some(r.q_out),
                w_total: Some(r.w_total),
                eta: Some(r.eta),
                dsc_flag: Some(r.flags.dsc_threshold),
                status: "ok".into(),
            },
            Err(e) => SweepRow {
                varied: varied.label().into(),
                method: method.label().into(),
                xi1,
                alpha,
                xi2: None,
                xi3: None,
                xi4: None,
                q_in: None,
                q_out: None,
                w_total: None,
                eta: None,
                dsc_flag: None,
                status: format!("error:{}:{}", e.stage.label(), e.source.code()),
            },
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Emission order: method, then `alpha`, then `xi1`.
    pub fn order(&self, other: &Self) -> Ordering {
        self.method
            .cmp(&other.method)
            .then(self.alpha.total_cmp(&other.alpha))
            .then(self.xi1.total_cmp(&other.xi1))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn header() -> Vec<&'static str> {
        SWEEP_HEADER.split(',').collect()
    }

    pub fn sort(&mut self) {
        self.rows.sort_by(SweepRow::order);
    }

    pub fn ok_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.is_ok())
    }

    pub fn to_csv(&self) -> Result<String, TableError> {
        write_csv(&self.rows)
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        Ok(SweepTable { rows: read_csv(text, SWEEP_HEADER)? })
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        Ok(serde_json::to_string_pretty(&self.rows)?)
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        Ok(SweepTable { rows: serde_json::from_str(text)? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub block: String,
    pub varied: String,
    pub method: String,
    pub xi: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub n_used: usize,
    pub converged: bool,
}

impl SpectrumRow {
    pub fn new(block: &str, varied: Knob, xi: f64, pair: &LevelPair) -> Self {
        SpectrumRow {
            block: block.into(),
            varied: varied.label().into(),
            method: pair.method.label().into(),
            xi,
            e0: pair.e0,
            e1: pair.e1,
            gap: isocycle_core::level_gap(pair),
            n_used: pair.n_used,
            converged: pair.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    pub fn to_csv(&self) -> Result<String, TableError> {
        write_csv(&self.rows)
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        Ok(SpectrumTable { rows: read_csv(text, SPECTRUM_HEADER)? })
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        Ok(serde_json::to_string_pretty(&self.rows)?)
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        Ok(SpectrumTable { rows: serde_json::from_str(text)? })
    }
}

fn write_csv<T: Serialize>(rows: &[T]) -> Result<String, TableError> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn read_csv<T: for<'de> Deserialize<'de>>(text: &str, expected: &'static str) -> Result<Vec<T>, TableError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let found = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(TableError::Header { expected, found });
    }
    r.deserialize().collect::<Result<Vec<T>, _>>().map_err(Into::into)
}
