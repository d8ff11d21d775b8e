//! Result rows and their serialization.
//!
//! Floats are written as the shortest decimal that parses back to the same
//! `f64`, so `read(write(rows)) == rows` exactly. Closed forms outside their
//! validity domain are written as empty CSV fields (`null` in JSON).

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "L")]
    pub levels: usize,
    pub k: usize,
    pub l0: i64,
    pub theta: f64,
    pub hermitian_fk: f64,
    pub paper_expression_fk: f64,
    pub closed_form_paper: Option<f64>,
    pub closed_form_hermitian: Option<f64>,
    pub asymmetry_systems: f64,
    pub asymmetry_bound: f64,
    pub reservoir_entropy_nats: f64,
    pub landauer_cost: f64,
    pub trace_distance_actual: f64,
    pub trace_distance_bound: f64,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationRecord {
    #[serde(rename = "L")]
    pub levels: usize,
    pub k: usize,
    pub theta: f64,
    pub phi: f64,
    pub naive_overlap: f64,
    pub reservoir_overlap: f64,
    pub crossover_k: Option<usize>,
    pub helstrom_error_naive: f64,
    pub helstrom_error_reservoir: f64,
    pub trace_distance_actual: f64,
    pub trace_distance_bound: f64,
}

pub fn write_csv<R: Serialize, W: Write>(rows: &[R], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: DeserializeOwned, X: io::Read>(input: X) -> CliResult<Vec<R>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub fn to_bytes<R: Serialize>(rows: &[R], format: OutputFormat) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Csv => write_csv(rows, &mut buf)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, rows)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

/// Writes to `path`, or stdout when `None`.
pub fn emit<R: Serialize>(rows: &[R], format: OutputFormat, path: Option<&Path>) -> CliResult<()> {
    let bytes = to_bytes(rows, format)?;
    match path {
        Some(p) => File::create(p)?.write_all(&bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}
