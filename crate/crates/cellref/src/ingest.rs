//! Publication and category-registry files.
//!
//! Publications CSV has the header `pub_id,year,doc_type,categories,citations,authors`.
//! `categories` and `authors` are `;`-joined, `citations` is a `|`-joined
//! list of `YYYY:count` entries. The JSONL variant carries one object per
//! line with the same field names and `citations` as a year to count map.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Read, Write};
use std::path::Path;

use cellref_core::{CategoryRegistry, Corpus, PublicationRecord, SubjectCategory};
use serde::{Deserialize, Serialize};

pub const PUBLICATION_FIELDS: [&str; 6] =
    ["pub_id", "year", "doc_type", "categories", "citations", "authors"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl InputFormat {
    /// `.jsonl` and `.ndjson` are JSONL, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "ndjson") => InputFormat::Jsonl,
            _ => InputFormat::Csv,
        }
    }
}

/// Lenient ingestion skips bad rows and reports them; strict stops at the
/// first one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IngestMode {
    #[default]
    Lenient,
    Strict,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    RowParse { line: u64, reason: String },

    #[error("line {line}: duplicate publication id {pub_id:?}")]
    DuplicateId { line: u64, pub_id: String },

    #[error("line {line}: publication {pub_id:?} has citations before its publication year")]
    TemporalViolation { line: u64, pub_id: String },

    #[error("line {line}: {source}")]
    Record {
        line: u64,
        source: cellref_core::Error,
    },

    #[error("bad header: {0}")]
    Header(String),

    #[error("input is not valid UTF-8")]
    NotUtf8,

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl IngestError {
    fn from_core(line: u64, err: cellref_core::Error) -> Self {
        match err {
            cellref_core::Error::DuplicateId(pub_id) => IngestError::DuplicateId { line, pub_id },
            cellref_core::Error::TemporalViolation(pub_id) => {
                IngestError::TemporalViolation { line, pub_id }
            }
            source => IngestError::Record { line, source },
        }
    }

    /// Line of the offending row, if the error concerns one.
    pub fn line(&self) -> Option<u64> {
        match self {
            IngestError::RowParse { line, .. }
            | IngestError::DuplicateId { line, .. }
            | IngestError::TemporalViolation { line, .. }
            | IngestError::Record { line, .. } => Some(*line),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub corpus: Corpus,
    pub rejected: Vec<IngestError>,
}

fn read_utf8<R: Read>(mut input: R) -> Result<String, IngestError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    String::from_utf8(bytes).map_err(|_| IngestError::NotUtf8)
}

/// Reads publications into a corpus. With a registry every code must be
/// registered; without one, codes are registered as they appear.
pub fn parse_publications<R: Read>(
    input: R,
    format: InputFormat,
    registry: Option<CategoryRegistry>,
    mode: IngestMode,
) -> Result<Ingested, IngestError> {
    let text = read_utf8(input)?;
    let strict_registry = registry.is_some();
    let mut sink = Sink {
        corpus: Corpus::new(registry.unwrap_or_default()),
        rejected: Vec::new(),
        strict_registry,
        mode,
    };
    match format {
        InputFormat::Csv => parse_csv(&text, &mut sink)?,
        InputFormat::Jsonl => parse_jsonl(&text, &mut sink)?,
    }
    Ok(Ingested {
        corpus: sink.corpus,
        rejected: sink.rejected,
    })
}

struct Sink {
    corpus: Corpus,
    rejected: Vec<IngestError>,
    strict_registry: bool,
    mode: IngestMode,
}

impl Sink {
    fn accept(&mut self, line: u64, row: Result<PublicationRecord, String>) -> Result<(), IngestError> {
        let result = row
            .map_err(|reason| IngestError::RowParse { line, reason })
            .and_then(|record| {
                let inserted = if self.strict_registry {
                    self.corpus.insert(record)
                } else {
                    self.corpus.insert_registering(record)
                };
                inserted.map_err(|e| IngestError::from_core(line, e))
            });
        match (result, self.mode) {
            (Ok(()), _) => Ok(()),
            (Err(e), IngestMode::Strict) => Err(e),
            (Err(e), IngestMode::Lenient) => {
                log::warn!("rejected row: {e}");
                self.rejected.push(e);
                Ok(())
            }
        }
    }
}

fn parse_csv(text: &str, sink: &mut Sink) -> Result<(), IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Header(e.to_string()))?
        .clone();
    let mut columns = [0usize; 6];
    for (slot, name) in columns.iter_mut().zip(PUBLICATION_FIELDS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::Header(format!("missing column {name:?}")))?;
    }
    for row in reader.records() {
        let (line, parsed) = match row {
            Ok(record) => {
                let line = record.position().map_or(0, |p| p.line());
                let parsed = if record.len() != headers.len() {
                    Err(format!(
                        "expected {} fields, found {}",
                        headers.len(),
                        record.len()
                    ))
                } else {
                    let field = |i: usize| record.get(columns[i]).unwrap_or("");
                    csv_row(field(0), field(1), field(2), field(3), field(4), field(5))
                };
                (line, parsed)
            }
            Err(e) => (
                e.position().map_or(0, |p| p.line()),
                Err(e.to_string()),
            ),
        };
        sink.accept(line, parsed)?;
    }
    Ok(())
}

fn split_list(field: &str) -> impl Iterator<Item = &str> {
    field.split(';').map(str::trim).filter(|s| !s.is_empty())
}

fn csv_row(
    pub_id: &str,
    year: &str,
    doc_type: &str,
    categories: &str,
    citations: &str,
    authors: &str,
) -> Result<PublicationRecord, String> {
    let pub_id = pub_id.trim();
    if pub_id.is_empty() {
        return Err("empty pub_id".into());
    }
    let year: i32 = year
        .trim()
        .parse()
        .map_err(|_| format!("invalid year {year:?}"))?;
    let mut by_year = BTreeMap::new();
    for entry in citations.split('|').map(str::trim).filter(|s| !s.is_empty()) {
        let (y, c) = entry
            .split_once(':')
            .ok_or_else(|| format!("citation entry {entry:?} is not YYYY:count"))?;
        let y: i32 = y
            .trim()
            .parse()
            .map_err(|_| format!("invalid citation year in {entry:?}"))?;
        let c: u32 = c
            .trim()
            .parse()
            .map_err(|_| format!("invalid citation count in {entry:?}"))?;
        if by_year.insert(y, c).is_some() {
            return Err(format!("citation year {y} listed twice"));
        }
    }
    let mut record = PublicationRecord::new(pub_id, year, doc_type)
        .with_categories(split_list(categories))
        .with_authors(split_list(authors));
    record.citations_by_year = by_year;
    Ok(record)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ListField {
    List(Vec<String>),
    Joined(String),
}

impl ListField {
    fn into_items(self) -> Vec<String> {
        match self {
            ListField::List(items) => items
                .into_iter()
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect(),
            ListField::Joined(s) => split_list(&s).map(String::from).collect(),
        }
    }
}

impl Default for ListField {
    fn default() -> Self {
        ListField::List(Vec::new())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    pub_id: String,
    year: i32,
    doc_type: String,
    categories: ListField,
    #[serde(default)]
    citations: BTreeMap<i32, u32>,
    #[serde(default)]
    authors: ListField,
}

fn parse_jsonl(text: &str, sink: &mut Sink) -> Result<(), IngestError> {
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<JsonRow>(raw)
            .map_err(|e| e.to_string())
            .and_then(|row| {
                if row.pub_id.trim().is_empty() {
                    return Err("empty pub_id".to_string());
                }
                let mut record = PublicationRecord::new(row.pub_id.trim(), row.year, &row.doc_type)
                    .with_categories(row.categories.into_items())
                    .with_authors(row.authors.into_items());
                record.citations_by_year = row.citations;
                Ok(record)
            });
        sink.accept(i as u64 + 1, parsed)?;
    }
    Ok(())
}

/// Writes the corpus in the given format; records in ascending `pub_id`.
pub fn write_publications<W: Write>(corpus: &Corpus, format: InputFormat, out: W) -> io::Result<()> {
    match format {
        InputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(PUBLICATION_FIELDS)?;
            for p in corpus.iter() {
                let citations: Vec<String> = p
                    .citations_by_year
                    .iter()
                    .map(|(y, c)| format!("{y}:{c}"))
                    .collect();
                writer.write_record([
                    p.pub_id.as_str(),
                    &p.year.to_string(),
                    &p.doc_type,
                    &join(&p.categories),
                    &citations.join("|"),
                    &join(&p.author_ids),
                ])?;
            }
            writer.flush()
        }
        InputFormat::Jsonl => {
            let mut out = out;
            for p in corpus.iter() {
                let row = JsonRow {
                    pub_id: p.pub_id.clone(),
                    year: p.year,
                    doc_type: p.doc_type.clone(),
                    categories: ListField::List(p.categories.iter().cloned().collect()),
                    citations: p.citations_by_year.clone(),
                    authors: ListField::List(p.author_ids.iter().cloned().collect()),
                };
                serde_json::to_writer(&mut out, &row)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
    }
}

fn join(items: &BTreeSet<String>) -> String {
    items.iter().map(String::as_str).collect::<Vec<_>>().join(";")
}

/// Reads a `code,name` registry. Any invalid row fails the whole file.
pub fn parse_registry<R: Read>(input: R) -> Result<CategoryRegistry, IngestError> {
    let text = read_utf8(input)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Header(e.to_string()))?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::Header(format!("missing column {name:?}")))
    };
    let (code_col, name_col) = (column("code")?, column("name")?);
    let mut registry = CategoryRegistry::new();
    for row in reader.records() {
        let row = row.map_err(|e| IngestError::RowParse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let code = row.get(code_col).unwrap_or("").trim();
        let name = row.get(name_col).unwrap_or("").trim();
        SubjectCategory::new(code, name)
            .and_then(|c| registry.insert(c))
            .map_err(|source| IngestError::Record { line, source })?;
    }
    Ok(registry)
}

pub fn write_registry<W: Write>(registry: &CategoryRegistry, out: W) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["code", "name"])?;
    for category in registry.iter() {
        writer.write_record([&category.code, &category.name])?;
    }
    writer.flush()
}
