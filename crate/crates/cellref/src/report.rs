//! CSV and JSON reports: reference tables, profile matrices and
//! difference listings with their per-dimension summaries.
//!
//! Values are stored at full precision and rounded only here. Every report
//! starts with a metadata preamble (`#` comment lines in CSV, a `metadata`
//! object in JSON) carrying the toolkit version, input digests and the
//! parameters of the run. Output is a pure function of its inputs.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use cellref_core::{
    CellKey, CitationWindow, CssScores, DifferenceRecord, DimensionSummary, ReferenceTable,
    ReferenceValues, ResearcherProfile,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("nothing to report: {0}")]
    EmptyReport(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed reference table: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    ReferenceTable,
    ProfileMatrix,
    DifferenceSummary,
}

/// Decimal places per field family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rounding {
    /// `e`, `T`, CSS scores and compared values.
    pub reference: usize,
    /// Profile shares, in percent.
    pub share: usize,
    /// Per-researcher mean citations.
    pub mean: usize,
    /// `r`, in percent.
    pub percent: usize,
}

impl Default for Rounding {
    fn default() -> Self {
        Self {
            reference: 1,
            share: 0,
            mean: 0,
            percent: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSpec {
    pub kind: ReportKind,
    pub format: ReportFormat,
    pub rounding: Rounding,
    pub path: Option<PathBuf>,
}

impl ReportSpec {
    pub fn new(kind: ReportKind, format: ReportFormat) -> Self {
        Self {
            kind,
            format,
            rounding: Rounding::default(),
            path: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub toolkit_version: String,
    /// Input name to SHA-256 hex digest.
    pub input_digests: BTreeMap<String, String>,
    pub parameters: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new() -> Self {
        Self {
            toolkit_version: format!("cellref {}", env!("CARGO_PKG_VERSION")),
            ..Self::default()
        }
    }

    fn csv_preamble(&self) -> String {
        let mut out = format!("# {}\n", self.toolkit_version);
        for (name, digest) in &self.input_digests {
            out.push_str(&format!("# input {name} sha256={digest}\n"));
        }
        for (key, value) in &self.parameters {
            out.push_str(&format!("# param {key}={value}\n"));
        }
        out
    }
}

fn fixed(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}

/// The same rounding as CSV, as a JSON number.
fn rounded(value: f64, decimals: usize) -> Value {
    let v: f64 = fixed(value, decimals).parse().expect("formatted float");
    json!(v)
}

fn percent(value: f64) -> f64 {
    value * 100.0
}

fn csv_bytes(preamble: &str, header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = preamble.as_bytes().to_vec();
    {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut out);
        writer.write_record(header).expect("in-memory write");
        for row in rows {
            writer.write_record(row).expect("in-memory write");
        }
        writer.flush().expect("in-memory write");
    }
    out
}

fn json_bytes(metadata: &Metadata, body: Map<String, Value>) -> Vec<u8> {
    let mut doc = Map::new();
    doc.insert("metadata".into(), serde_json::to_value(metadata).expect("metadata"));
    doc.extend(body);
    let mut out = serde_json::to_vec_pretty(&Value::Object(doc)).expect("json");
    out.push(b'\n');
    out
}

fn css_width(entries: &[&ReferenceValues]) -> usize {
    entries
        .iter()
        .filter_map(|e| e.css.as_ref().map(CssScores::k))
        .max()
        .unwrap_or(cellref_core::DEFAULT_CSS_K)
}

/// Rows sorted by `(cell, year, window)`.
pub fn emit_reference_table(
    table: &ReferenceTable,
    spec: &ReportSpec,
    metadata: &Metadata,
) -> Result<Vec<u8>, ReportError> {
    if table.is_empty() {
        return Err(ReportError::EmptyReport("reference table has no entries"));
    }
    let entries: Vec<&ReferenceValues> = table.iter().collect();
    let width = css_width(&entries);
    let d = spec.rounding.reference;
    let mut header: Vec<String> = ["cell", "year", "window", "n", "e", "t"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=width).map(|i| format!("css_b{i}")));

    match spec.format {
        ReportFormat::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    let mut row = vec![
                        e.cell.to_string(),
                        e.year.to_string(),
                        e.window.to_string(),
                        e.n.to_string(),
                        fixed(e.e, d),
                        fixed(e.t, d),
                    ];
                    for i in 0..width {
                        row.push(
                            e.css
                                .as_ref()
                                .and_then(|c| c.scores().get(i))
                                .map(|&b| fixed(b, d))
                                .unwrap_or_default(),
                        );
                    }
                    row
                })
                .collect();
            Ok(csv_bytes(&metadata.csv_preamble(), &header, &rows))
        }
        ReportFormat::Json => {
            let rows: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let mut row = Map::new();
                    row.insert("cell".into(), json!(e.cell.to_string()));
                    row.insert("year".into(), json!(e.year));
                    row.insert("window".into(), json!(e.window.length_years()));
                    row.insert("n".into(), json!(e.n));
                    row.insert("e".into(), rounded(e.e, d));
                    row.insert("t".into(), rounded(e.t, d));
                    for i in 0..width {
                        let value = e
                            .css
                            .as_ref()
                            .and_then(|c| c.scores().get(i))
                            .map_or(Value::Null, |&b| rounded(b, d));
                        row.insert(format!("css_b{}", i + 1), value);
                    }
                    Value::Object(row)
                })
                .collect();
            let mut body = Map::new();
            body.insert("entries".into(), Value::Array(rows));
            Ok(json_bytes(metadata, body))
        }
    }
}

/// Reads a reference table emitted as CSV (comment preamble allowed) or
/// JSON. Empty CSS columns are read as absent scores.
pub fn read_reference_table<R: Read>(mut input: R, format: ReportFormat) -> Result<ReferenceTable, ReportError> {
    let malformed = |m: String| ReportError::Malformed(m);
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| malformed(e.to_string()))?;
    let mut table = ReferenceTable::new();
    match format {
        ReportFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .comment(Some(b'#'))
                .from_reader(text.as_bytes());
            let headers = reader.headers().map_err(|e| malformed(e.to_string()))?.clone();
            let col = |name: &str| headers.iter().position(|h| h.trim() == name);
            let required = ["cell", "year", "window", "n", "e", "t"]
                .map(|n| col(n).ok_or_else(|| malformed(format!("missing column {n:?}"))));
            let [c_cell, c_year, c_window, c_n, c_e, c_t] = {
                let mut out = [0usize; 6];
                for (slot, r) in out.iter_mut().zip(required) {
                    *slot = r?;
                }
                out
            };
            let css_cols: Vec<usize> = (1..)
                .map_while(|i| col(&format!("css_b{i}")))
                .collect();
            for row in reader.records() {
                let row = row.map_err(|e| malformed(e.to_string()))?;
                let line = row.position().map_or(0, |p| p.line());
                let field = |i: usize| row.get(i).unwrap_or("").trim();
                let bad = |what: &str| malformed(format!("line {line}: invalid {what}"));
                let css: Vec<f64> = css_cols
                    .iter()
                    .map(|&i| field(i))
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| bad("css score")))
                    .collect::<Result<_, _>>()?;
                let values = ReferenceValues::from_values(
                    field(c_cell).parse::<CellKey>().map_err(|_| bad("cell"))?,
                    field(c_year).parse().map_err(|_| bad("year"))?,
                    field(c_window)
                        .parse()
                        .ok()
                        .and_then(|w| CitationWindow::new(w).ok())
                        .ok_or_else(|| bad("window"))?,
                    field(c_n).parse().map_err(|_| bad("n"))?,
                    field(c_e).parse().map_err(|_| bad("e"))?,
                    field(c_t).parse().map_err(|_| bad("t"))?,
                    if css.is_empty() {
                        None
                    } else {
                        Some(CssScores::from_scores(css).map_err(|e| malformed(e.to_string()))?)
                    },
                )
                .map_err(|e| malformed(format!("line {line}: {e}")))?;
                table.insert(values);
            }
        }
        ReportFormat::Json => {
            let doc: Value = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
            let entries = doc
                .get("entries")
                .and_then(Value::as_array)
                .ok_or_else(|| malformed("missing \"entries\" array".into()))?;
            for (i, entry) in entries.iter().enumerate() {
                let bad = |what: &str| malformed(format!("entry {i}: invalid {what}"));
                let num = |k: &str| entry.get(k).and_then(Value::as_f64).ok_or_else(|| bad(k));
                let css: Vec<f64> = (1..)
                    .map_while(|j| entry.get(format!("css_b{j}")))
                    .filter_map(Value::as_f64)
                    .collect();
                let values = ReferenceValues::from_values(
                    entry
                        .get("cell")
                        .and_then(Value::as_str)
                        .and_then(|c| c.parse().ok())
                        .ok_or_else(|| bad("cell"))?,
                    num("year")? as i32,
                    CitationWindow::new(num("window")? as u32).map_err(|_| bad("window"))?,
                    num("n")? as usize,
                    num("e")?,
                    num("t")?,
                    if css.is_empty() {
                        None
                    } else {
                        Some(CssScores::from_scores(css).map_err(|e| malformed(e.to_string()))?)
                    },
                )
                .map_err(|e| malformed(format!("entry {i}: {e}")))?;
                table.insert(values);
            }
        }
    }
    Ok(table)
}

/// Cells by researcher. The CSV has a `layer` column: one `n_articles`
/// row, a `share` row per cell (percent), a parallel `top` row per cell
/// (1 marks the researcher's top share) and a `mean_citations` footer.
pub fn emit_profile_matrix(
    profiles: &[ResearcherProfile],
    spec: &ReportSpec,
    metadata: &Metadata,
) -> Result<Vec<u8>, ReportError> {
    if profiles.is_empty() {
        return Err(ReportError::EmptyReport("no researcher profiles"));
    }
    let r = spec.rounding;
    let mut cells: Vec<&CellKey> = profiles.iter().flat_map(|p| p.shares.keys()).collect();
    cells.sort();
    cells.dedup();

    match spec.format {
        ReportFormat::Csv => {
            let mut header = vec!["layer".to_string(), "cell".to_string()];
            header.extend(profiles.iter().map(|p| p.researcher_id.clone()));
            let mut rows = Vec::new();
            let row = |layer: &str, cell: String, values: Vec<String>| {
                let mut row = vec![layer.to_string(), cell];
                row.extend(values);
                row
            };
            rows.push(row(
                "n_articles",
                String::new(),
                profiles.iter().map(|p| p.n_articles.to_string()).collect(),
            ));
            for cell in &cells {
                rows.push(row(
                    "share",
                    cell.to_string(),
                    profiles
                        .iter()
                        .map(|p| fixed(percent(p.share(cell)), r.share))
                        .collect(),
                ));
            }
            for cell in &cells {
                rows.push(row(
                    "top",
                    cell.to_string(),
                    profiles
                        .iter()
                        .map(|p| if p.is_top(cell) { "1" } else { "0" }.to_string())
                        .collect(),
                ));
            }
            rows.push(row(
                "mean_citations",
                String::new(),
                profiles.iter().map(|p| fixed(p.mean_citations, r.mean)).collect(),
            ));
            Ok(csv_bytes(&metadata.csv_preamble(), &header, &rows))
        }
        ReportFormat::Json => {
            let columns: Vec<Value> = profiles
                .iter()
                .map(|p| {
                    let shares: Map<String, Value> = p
                        .shares
                        .iter()
                        .map(|(k, &s)| (k.to_string(), rounded(percent(s), r.share)))
                        .collect();
                    json!({
                        "researcher": p.researcher_id,
                        "n_articles": p.n_articles,
                        "share": shares,
                        "top": p.top_cells.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "mean_citations": rounded(p.mean_citations, r.mean),
                    })
                })
                .collect();
            let mut body = Map::new();
            body.insert(
                "cells".into(),
                json!(cells.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
            );
            body.insert("researchers".into(), Value::Array(columns));
            Ok(json_bytes(metadata, body))
        }
    }
}

/// The two difference reports: the full record listing and the
/// per-`(dimension, metric)` summary block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceReport {
    pub records: Vec<u8>,
    pub summary: Vec<u8>,
}

pub fn emit_difference_summary(
    records: &[DifferenceRecord],
    summaries: &[DimensionSummary],
    spec: &ReportSpec,
    metadata: &Metadata,
) -> Result<DifferenceReport, ReportError> {
    if records.is_empty() {
        return Err(ReportError::EmptyReport("no difference records"));
    }
    let r = spec.rounding;
    let mut records: Vec<&DifferenceRecord> = records.iter().collect();
    records.sort_by(|a, b| {
        (a.dimension, a.metric, &a.left, &a.right).cmp(&(b.dimension, b.metric, &b.left, &b.right))
    });
    let mut summaries = summaries.to_vec();
    summaries.sort_by_key(|s| (s.dimension, s.metric));

    match spec.format {
        ReportFormat::Csv => {
            let header: Vec<String> = ["dimension", "metric", "left", "right", "x", "y", "r_percent"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|d| {
                    vec![
                        d.dimension.to_string(),
                        d.metric.to_string(),
                        d.left.to_string(),
                        d.right.to_string(),
                        fixed(d.x, r.reference),
                        fixed(d.y, r.reference),
                        fixed(percent(d.r), r.percent),
                    ]
                })
                .collect();
            let summary_header: Vec<String> =
                ["dimension", "metric", "count", "min_r_percent", "max_r_percent"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
            let summary_rows: Vec<Vec<String>> = summaries
                .iter()
                .map(|s| {
                    vec![
                        s.dimension.to_string(),
                        s.metric.to_string(),
                        s.count.to_string(),
                        fixed(percent(s.min_r), r.percent),
                        fixed(percent(s.max_r), r.percent),
                    ]
                })
                .collect();
            let preamble = metadata.csv_preamble();
            Ok(DifferenceReport {
                records: csv_bytes(&preamble, &header, &rows),
                summary: csv_bytes(&preamble, &summary_header, &summary_rows),
            })
        }
        ReportFormat::Json => {
            let rows: Vec<Value> = records
                .iter()
                .map(|d| {
                    json!({
                        "dimension": d.dimension.as_str(),
                        "metric": d.metric.as_str(),
                        "left": d.left.to_string(),
                        "right": d.right.to_string(),
                        "x": rounded(d.x, r.reference),
                        "y": rounded(d.y, r.reference),
                        "r_percent": rounded(percent(d.r), r.percent),
                    })
                })
                .collect();
            let blocks: Vec<Value> = summaries
                .iter()
                .map(|s| {
                    json!({
                        "dimension": s.dimension.as_str(),
                        "metric": s.metric.as_str(),
                        "count": s.count,
                        "min_r_percent": rounded(percent(s.min_r), r.percent),
                        "max_r_percent": rounded(percent(s.max_r), r.percent),
                    })
                })
                .collect();
            let mut body = Map::new();
            body.insert("records".into(), Value::Array(rows));
            let records = json_bytes(metadata, body);
            let mut body = Map::new();
            body.insert("summary".into(), Value::Array(blocks));
            Ok(DifferenceReport {
                records,
                summary: json_bytes(metadata, body),
            })
        }
    }
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_report(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let io = |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}
