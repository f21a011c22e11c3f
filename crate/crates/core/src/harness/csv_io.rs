//! CSV codecs. Floats are written with 17 significant digits so that parsing
//! an emitted file gives back the exact values; absent values are `NA`.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use csv::StringRecord;

use super::interaction::RunOutcome;
use crate::error::{Error, Result};

pub const NA: &str = "NA";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

/// A row type with a fixed header.
pub trait CsvRow: Sized {
    const HEADER: &'static [&'static str];
    fn to_record(&self) -> Vec<String>;
    fn from_record(r: &StringRecord) -> std::result::Result<Self, String>;
}

fn field(r: &StringRecord, i: usize) -> std::result::Result<&str, String> {
    r.get(i).ok_or_else(|| format!("missing column {i}"))
}

fn parse_f64(r: &StringRecord, i: usize) -> std::result::Result<f64, String> {
    let s = field(r, i)?;
    s.parse().map_err(|_| format!("column {i}: not a number: {s:?}"))
}

fn parse_opt(r: &StringRecord, i: usize) -> std::result::Result<Option<f64>, String> {
    match field(r, i)? {
        NA => Ok(None),
        _ => parse_f64(r, i).map(Some),
    }
}

fn parse_usize(r: &StringRecord, i: usize) -> std::result::Result<usize, String> {
    let s = field(r, i)?;
    s.parse().map_err(|_| format!("column {i}: not a count: {s:?}"))
}

/// Writes `rows` with a header line to any writer. `label` names the sink in errors.
pub fn write_rows<T: CsvRow, W: Write>(sink: W, label: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(T::HEADER).map_err(|e| Error::csv(label, e))?;
    for row in rows {
        w.write_record(row.to_record()).map_err(|e| Error::csv(label, e))?;
    }
    w.flush().map_err(|e| Error::io(label, e))
}

pub fn read_rows<T: CsvRow, R: Read>(source: R, label: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(source);
    let header = r.headers().map_err(|e| Error::csv(label, e))?.clone();
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::Parse {
            path: label.into(),
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(label, e))?;
        out.push(T::from_record(&rec).map_err(|message| Error::Parse {
            path: label.into(),
            message: format!("row {}: {message}", line + 1),
        })?);
    }
    Ok(out)
}

pub fn write_csv<T: CsvRow>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_rows(std::io::BufWriter::new(file), path, rows)
}

pub fn read_csv<T: CsvRow>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_rows(std::io::BufReader::new(file), path)
}

/// One query of one simulated interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub run_id: usize,
    pub query_index: usize,
    pub query_kind: String,
    /// `None` is ⊥.
    pub answer: Option<f64>,
    pub width: f64,
    pub truth: f64,
    pub abs_error: Option<f64>,
    pub failed: bool,
    pub beta_i: Option<f64>,
}

impl CsvRow for SimRow {
    const HEADER: &'static [&'static str] = &[
        "run_id",
        "query_index",
        "query_kind",
        "answer",
        "width",
        "truth",
        "abs_error",
        "failed",
        "beta_i",
    ];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.run_id.to_string(),
            self.query_index.to_string(),
            self.query_kind.clone(),
            fmt_opt(self.answer),
            fmt_f64(self.width),
            fmt_f64(self.truth),
            fmt_opt(self.abs_error),
            u8::from(self.failed).to_string(),
            fmt_opt(self.beta_i),
        ]
    }

    fn from_record(r: &StringRecord) -> std::result::Result<Self, String> {
        let failed = match field(r, 7)? {
            "0" => false,
            "1" => true,
            s => return Err(format!("failed must be 0 or 1, got {s:?}")),
        };
        let row = Self {
            run_id: parse_usize(r, 0)?,
            query_index: parse_usize(r, 1)?,
            query_kind: field(r, 2)?.to_string(),
            answer: parse_opt(r, 3)?,
            width: parse_f64(r, 4)?,
            truth: parse_f64(r, 5)?,
            abs_error: parse_opt(r, 6)?,
            failed,
            beta_i: parse_opt(r, 8)?,
        };
        if row.answer.is_some() && row.width <= 0.0 {
            return Err(format!("nonpositive width {} on an answered query", row.width));
        }
        Ok(row)
    }
}

/// Flattens outcomes into rows, in run then query order.
pub fn sim_rows(outcomes: &[RunOutcome]) -> Vec<SimRow> {
    outcomes
        .iter()
        .flat_map(|o| {
            o.transcript.entries.iter().enumerate().map(move |(i, e)| SimRow {
                run_id: o.run_id,
                query_index: i + 1,
                query_kind: e.query.kind_name().to_string(),
                answer: e.answer.point,
                width: e.answer.width,
                truth: e.truth,
                abs_error: e.abs_error,
                failed: e.answer.failed,
                beta_i: e.beta_i,
            })
        })
        .collect()
}

/// Fraction of runs in which some answered interval missed its population
/// value, computed from simulation rows alone.
pub fn audit_coverage(rows: &[SimRow]) -> Option<f64> {
    let mut missed: BTreeMap<usize, bool> = BTreeMap::new();
    for r in rows {
        let miss = r.abs_error.is_some_and(|e| e.partial_cmp(&r.width) != Some(std::cmp::Ordering::Less));
        *missed.entry(r.run_id).or_default() |= miss;
    }
    if missed.is_empty() {
        return None;
    }
    Some(missed.values().filter(|&&m| m).count() as f64 / missed.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSweepRow {
    pub bound_name: String,
    pub n: usize,
    pub k: usize,
    pub beta: f64,
    pub tau: f64,
    /// `name=value` pairs separated by `;`.
    pub optimizer: String,
}

impl CsvRow for BoundSweepRow {
    const HEADER: &'static [&'static str] = &["bound_name", "n", "k", "beta", "tau", "optimizer"];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.bound_name.clone(),
            self.n.to_string(),
            self.k.to_string(),
            fmt_f64(self.beta),
            fmt_f64(self.tau),
            self.optimizer.clone(),
        ]
    }

    fn from_record(r: &StringRecord) -> std::result::Result<Self, String> {
        Ok(Self {
            bound_name: field(r, 0)?.to_string(),
            n: parse_usize(r, 1)?,
            k: parse_usize(r, 2)?,
            beta: parse_f64(r, 3)?,
            tau: parse_f64(r, 4)?,
            optimizer: field(r, 5)?.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmseRow {
    pub k: usize,
    /// `None` for mechanisms without a proven bound.
    pub upper_bound_rmse: Option<f64>,
    /// `√(mean e²)` over runs, `e` the largest absolute error of a run.
    pub realized_rmse_mean: f64,
    /// Sample standard deviation of `e` over runs.
    pub realized_rmse_std: f64,
}

impl CsvRow for RmseRow {
    const HEADER: &'static [&'static str] = &["k", "upper_bound_rmse", "realized_rmse_mean", "realized_rmse_std"];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.k.to_string(),
            fmt_opt(self.upper_bound_rmse),
            fmt_f64(self.realized_rmse_mean),
            fmt_f64(self.realized_rmse_std),
        ]
    }

    fn from_record(r: &StringRecord) -> std::result::Result<Self, String> {
        Ok(Self {
            k: parse_usize(r, 0)?,
            upper_bound_rmse: parse_opt(r, 1)?,
            realized_rmse_mean: parse_f64(r, 2)?,
            realized_rmse_std: parse_f64(r, 3)?,
        })
    }
}

/// Queries answered by one series at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryCountRow {
    pub series: String,
    pub n: usize,
    pub beta: f64,
    pub tau: f64,
    pub k_mean: f64,
    pub k_std: f64,
    /// Simulated runs; 0 for values read off a bound.
    pub runs: usize,
}

impl CsvRow for QueryCountRow {
    const HEADER: &'static [&'static str] = &["series", "n", "beta", "tau", "k_mean", "k_std", "runs"];

    fn to_record(&self) -> Vec<String> {
        vec![
            self.series.clone(),
            self.n.to_string(),
            fmt_f64(self.beta),
            fmt_f64(self.tau),
            fmt_f64(self.k_mean),
            fmt_f64(self.k_std),
            self.runs.to_string(),
        ]
    }

    fn from_record(r: &StringRecord) -> std::result::Result<Self, String> {
        Ok(Self {
            series: field(r, 0)?.to_string(),
            n: parse_usize(r, 1)?,
            beta: parse_f64(r, 2)?,
            tau: parse_f64(r, 3)?,
            k_mean: parse_f64(r, 4)?,
            k_std: parse_f64(r, 5)?,
            runs: parse_usize(r, 6)?,
        })
    }
}
