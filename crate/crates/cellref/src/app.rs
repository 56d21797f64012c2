//! Command-line front end.
//!
//! Every command resolves its flags (merged over an optional config file)
//! into a [`RunConfig`], runs, writes its reports into the output directory
//! and finishes with a `<command>_manifest.json` run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use cellref_core::compare::{
    cell_dimension_pairs, summarize_all, window_dimension_pairs, year_dimension_pairs,
};
use cellref_core::{
    adjacent_triples, build_partition, build_reference_table, researcher_profile, AdjacentTriple,
    CategoryRegistry, CellKey, CitationWindow, Comparison, Corpus, Metric, ReferenceTable,
    YearRange, DEFAULT_CSS_K,
};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::read_config;
use crate::error::AppError;
use crate::generate::{generate_synthetic_corpus, GeneratorSpec};
use crate::ingest::{
    parse_publications, parse_registry, write_publications, write_registry, IngestMode, InputFormat,
};
use crate::report::{
    emit_difference_summary, emit_profile_matrix, emit_reference_table, read_reference_table,
    write_report, Metadata, ReportFormat, ReportKind, ReportSpec,
};

/// Cell-level citation reference values and their comparison.
#[derive(Debug, Parser)]
#[command(name = "cellref", version, about)]
pub struct Cli {
    /// `key = value` file of flag defaults; flags given here win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check input files and summarize the corpus.
    Validate(SharedArgs),
    /// Compute reference values per cell, year and window.
    Refvalues(SharedArgs),
    /// Relative differences across years, windows and adjacent cells.
    Compare {
        #[command(flatten)]
        shared: SharedArgs,
        #[command(flatten)]
        compare: CompareArgs,
    },
    /// Distribution of researchers' articles over cells.
    Profile {
        #[command(flatten)]
        shared: SharedArgs,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Write a synthetic corpus from a generator spec.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SharedArgs {
    /// Publications file (CSV, or JSONL by extension).
    #[arg(long)]
    pub pubs: Option<String>,
    /// Category registry CSV (`code,name`).
    #[arg(long)]
    pub cats: Option<String>,
    /// Directory for reports and the run manifest [default: .]
    #[arg(long)]
    pub out_dir: Option<String>,
    /// csv or json [default: csv]
    #[arg(long)]
    pub format: Option<String>,
    /// Document type admitted to cells [default: article]
    #[arg(long)]
    pub doc_type: Option<String>,
    /// Publication years, `A-B` inclusive.
    #[arg(long)]
    pub years: Option<String>,
    /// Citation window lengths, e.g. `3,4,5`.
    #[arg(long)]
    pub windows: Option<String>,
    /// Number of CSS scores; the last one is the threshold T [default: 3]
    #[arg(long)]
    pub css_k: Option<String>,
    /// Fail on the first invalid input row.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CompareArgs {
    /// Reference table report to compare instead of computing one.
    #[arg(long)]
    pub ref_table: Option<String>,
    /// Adjacent cell triples `i:j` (cells i, i;j and j).
    #[arg(long)]
    pub triples: Option<String>,
    /// Publication year pairs `a:b`.
    #[arg(long)]
    pub year_pairs: Option<String>,
    /// Window length pairs `a:b`.
    #[arg(long)]
    pub window_pairs: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProfileArgs {
    /// Researcher ids, comma separated [default: all]
    #[arg(long)]
    pub researchers: Option<String>,
    /// Citation window of the mean-citation footer [default: 5]
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GenerateArgs {
    /// Generator spec (TOML).
    #[arg(long)]
    pub spec: Option<String>,
    /// RNG seed [default: 0]
    #[arg(long)]
    pub seed: Option<String>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out_dir: Option<String>,
    /// csv writes publications.csv, json writes publications.jsonl [default: csv]
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Refvalues,
    Compare,
    Profile,
    Generate,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::Validate => "validate",
            CommandKind::Refvalues => "refvalues",
            CommandKind::Compare => "compare",
            CommandKind::Profile => "profile",
            CommandKind::Generate => "generate",
        }
    }
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Validate(_) => CommandKind::Validate,
            Command::Refvalues(_) => CommandKind::Refvalues,
            Command::Compare { .. } => CommandKind::Compare,
            Command::Profile { .. } => CommandKind::Profile,
            Command::Generate(_) => CommandKind::Generate,
        }
    }

    fn flag_values(&self) -> Vec<(&'static str, Option<String>)> {
        fn shared(s: &SharedArgs) -> Vec<(&'static str, Option<String>)> {
            vec![
                ("pubs", s.pubs.clone()),
                ("cats", s.cats.clone()),
                ("out-dir", s.out_dir.clone()),
                ("format", s.format.clone()),
                ("doc-type", s.doc_type.clone()),
                ("years", s.years.clone()),
                ("windows", s.windows.clone()),
                ("css-k", s.css_k.clone()),
                ("strict", s.strict.then(|| "true".to_string())),
            ]
        }
        match self {
            Command::Validate(s) | Command::Refvalues(s) => shared(s),
            Command::Compare { shared: s, compare: c } => {
                let mut v = shared(s);
                v.extend([
                    ("ref-table", c.ref_table.clone()),
                    ("triples", c.triples.clone()),
                    ("year-pairs", c.year_pairs.clone()),
                    ("window-pairs", c.window_pairs.clone()),
                ]);
                v
            }
            Command::Profile { shared: s, profile: p } => {
                let mut v = shared(s);
                v.extend([
                    ("researchers", p.researchers.clone()),
                    ("window", p.window.clone()),
                ]);
                v
            }
            Command::Generate(g) => vec![
                ("spec", g.spec.clone()),
                ("seed", g.seed.clone()),
                ("out-dir", g.out_dir.clone()),
                ("format", g.format.clone()),
            ],
        }
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub pubs: Option<PathBuf>,
    pub cats: Option<PathBuf>,
    pub ref_table: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub format: ReportFormat,
    pub doc_type: String,
    pub years: YearRange,
    pub windows: Vec<CitationWindow>,
    pub css_k: usize,
    pub strict: bool,
    pub triples: Vec<(String, String)>,
    /// False when the triples are the built-in defaults.
    pub triples_explicit: bool,
    pub year_pairs: Vec<(i32, i32)>,
    pub window_pairs: Vec<(CitationWindow, CitationWindow)>,
    pub researchers: Vec<String>,
    pub window: CitationWindow,
    pub spec: Option<PathBuf>,
    pub seed: u64,
    /// Keys set by a flag or the config file.
    pub explicit: Vec<&'static str>,
}

const DEFAULT_TRIPLES: [(&str, &str); 2] = [("M", "MA"), ("AA", "PPF")];

fn parse_year_range(text: &str) -> Result<YearRange, AppError> {
    let bad = || AppError::usage(format!("--years {text:?}: expected A-B with A <= B"));
    let (a, b) = text.split_once('-').ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    YearRange::new(a, b).map_err(|_| bad())
}

fn parse_window(text: &str, flag: &str) -> Result<CitationWindow, AppError> {
    text.trim()
        .parse::<u32>()
        .ok()
        .and_then(|w| CitationWindow::new(w).ok())
        .ok_or_else(|| AppError::usage(format!("--{flag}: {text:?} is not a window length >= 1")))
}

fn parse_windows(text: &str) -> Result<Vec<CitationWindow>, AppError> {
    let mut out = text
        .split(',')
        .map(|w| parse_window(w, "windows"))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn parse_pairs<T>(
    text: &str,
    flag: &str,
    item: impl Fn(&str) -> Option<T>,
) -> Result<Vec<(T, T)>, AppError> {
    text.split(',')
        .map(|pair| {
            pair.split_once(':')
                .and_then(|(a, b)| Some((item(a.trim())?, item(b.trim())?)))
                .ok_or_else(|| AppError::usage(format!("--{flag}: {pair:?} is not a:b")))
        })
        .collect()
}

fn parse_bool(text: &str, key: &str) -> Result<bool, AppError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(AppError::usage(format!("{key}: {text:?} is not a boolean"))),
    }
}

fn consecutive<T: Copy>(items: &[T]) -> Vec<(T, T)> {
    items.windows(2).map(|w| (w[0], w[1])).collect()
}

impl RunConfig {
    /// Resolves the merged key/value settings of `command`.
    pub fn resolve(command: CommandKind, values: &BTreeMap<String, String>) -> Result<Self, AppError> {
        let get = |key: &str| values.get(key).map(String::as_str);
        let path = |key: &str| get(key).map(PathBuf::from);
        let explicit = crate::config::CONFIG_KEYS
            .iter()
            .copied()
            .filter(|k| values.contains_key(*k))
            .collect();

        let format = match get("format").unwrap_or("csv") {
            "csv" => ReportFormat::Csv,
            "json" => ReportFormat::Json,
            other => return Err(AppError::usage(format!("--format {other:?}: expected csv or json"))),
        };
        let years = match get("years") {
            Some(text) => parse_year_range(text)?,
            None if command == CommandKind::Profile => YearRange::new(2000, 2007).expect("valid"),
            None => YearRange::new(2005, 2007).expect("valid"),
        };
        let windows = match get("windows") {
            Some(text) => parse_windows(text)?,
            None => [3, 4, 5].map(|w| CitationWindow::new(w).expect("valid")).to_vec(),
        };
        let css_k = match get("css-k") {
            Some(text) => match text.trim().parse::<usize>() {
                Ok(k) if k >= 1 => k,
                _ => return Err(AppError::usage(format!("--css-k {text:?}: expected an integer >= 1"))),
            },
            None => DEFAULT_CSS_K,
        };
        let triples: Vec<(String, String)> = match get("triples") {
            Some(text) => parse_pairs(text, "triples", |s| (!s.is_empty()).then(|| s.to_string()))?,
            None => DEFAULT_TRIPLES
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        };
        for (i, j) in &triples {
            adjacent_triples(i, j).map_err(|e| AppError::usage(format!("--triples {i}:{j}: {e}")))?;
        }
        let year_pairs = match get("year-pairs") {
            Some(text) => parse_pairs(text, "year-pairs", |s| s.parse().ok())?,
            None => consecutive(&years.years().collect::<Vec<_>>()),
        };
        let window_pairs = match get("window-pairs") {
            Some(text) => parse_pairs(text, "window-pairs", |s| {
                s.parse().ok().and_then(|w| CitationWindow::new(w).ok())
            })?,
            None => consecutive(&windows),
        };
        let researchers = get("researchers")
            .map(|text| {
                text.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            })
            .unwrap_or_default();
        let window = match get("window") {
            Some(text) => parse_window(text, "window")?,
            None => CitationWindow::new(5).expect("valid"),
        };
        let seed = match get("seed") {
            Some(text) => text
                .trim()
                .parse()
                .map_err(|_| AppError::usage(format!("--seed {text:?}: expected an unsigned integer")))?,
            None => 0,
        };
        Ok(RunConfig {
            command,
            pubs: path("pubs"),
            cats: path("cats"),
            ref_table: path("ref-table"),
            out_dir: path("out-dir").unwrap_or_else(|| PathBuf::from(".")),
            format,
            doc_type: get("doc-type").unwrap_or("article").to_string(),
            years,
            windows,
            css_k,
            strict: get("strict").map(|v| parse_bool(v, "strict")).transpose()?.unwrap_or(false),
            triples_explicit: values.contains_key("triples"),
            triples,
            year_pairs,
            window_pairs,
            researchers,
            window,
            spec: path("spec"),
            seed,
            explicit,
        })
    }

    fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(&key)
    }

    /// Parameter echo for reports and manifests. Paths are reduced to
    /// file names so outputs do not depend on where a run happens.
    fn parameters(&self) -> BTreeMap<String, String> {
        let join = |items: Vec<String>| items.join(",");
        let mut p = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            p.insert(k.to_string(), v);
        };
        put("command", self.command.as_str().into());
        match self.command {
            CommandKind::Generate => {
                put("seed", self.seed.to_string());
            }
            _ => {
                put("doc-type", self.doc_type.clone());
                put("years", format!("{}-{}", self.years.start(), self.years.end()));
                put("windows", join(self.windows.iter().map(|w| w.to_string()).collect()));
                put("css-k", self.css_k.to_string());
                put("strict", self.strict.to_string());
            }
        }
        match self.command {
            CommandKind::Compare => {
                put("triples", join(self.triples.iter().map(|(i, j)| format!("{i}:{j}")).collect()));
                put(
                    "year-pairs",
                    join(self.year_pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect()),
                );
                put(
                    "window-pairs",
                    join(self.window_pairs.iter().map(|(a, b)| format!("{a}:{b}")).collect()),
                );
            }
            CommandKind::Profile => {
                put("researchers", join(self.researchers.clone()));
                put("window", self.window.to_string());
            }
            _ => {}
        }
        p
    }
}

/// Resolves the command line, merged over the config file if one is given.
pub fn resolve(cli: &Cli) -> Result<RunConfig, AppError> {
    let mut values = match &cli.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    for (key, value) in cli.command.flag_values() {
        if let Some(value) = value {
            values.insert(key.to_string(), value);
        }
    }
    RunConfig::resolve(cli.command.kind(), &values)
}

/// Resolves and executes a parsed command line.
pub fn run(cli: &Cli) -> Result<(), AppError> {
    let config = resolve(cli)?;
    execute(&config)
}

pub fn execute(config: &RunConfig) -> Result<(), AppError> {
    let mut run = Run::new(config);
    match config.command {
        CommandKind::Validate => run.validate(),
        CommandKind::Refvalues => run.refvalues(),
        CommandKind::Compare => run.compare(),
        CommandKind::Profile => run.profile(),
        CommandKind::Generate => run.generate(),
    }?;
    run.write_manifest()
}

#[derive(Serialize)]
struct Manifest<'a> {
    toolkit_version: &'a str,
    command: &'a str,
    parameters: &'a BTreeMap<String, String>,
    inputs: &'a BTreeMap<String, String>,
    outputs: &'a [String],
}

struct Run<'a> {
    config: &'a RunConfig,
    metadata: Metadata,
    outputs: Vec<String>,
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

impl<'a> Run<'a> {
    fn new(config: &'a RunConfig) -> Self {
        let mut metadata = Metadata::new();
        metadata.parameters = config.parameters();
        Self {
            config,
            metadata,
            outputs: Vec::new(),
        }
    }

    /// Reads an input file and records its digest.
    fn read_input(&mut self, path: &Path) -> Result<Vec<u8>, AppError> {
        let bytes = fs::read(path).map_err(|e| AppError::io(path, e))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        self.metadata.input_digests.insert(file_name(path), digest);
        Ok(bytes)
    }

    fn output(&mut self, name: String, bytes: &[u8]) -> Result<(), AppError> {
        let path = self.config.out_dir.join(&name);
        write_report(&path, bytes)?;
        info!("wrote {}", path.display());
        self.outputs.push(name);
        Ok(())
    }

    fn report_name(&self, stem: &str) -> String {
        format!("{stem}.{}", self.config.format.extension())
    }

    fn load_corpus(&mut self) -> Result<(Corpus, usize), AppError> {
        let pubs = self
            .config
            .pubs
            .clone()
            .ok_or_else(|| AppError::usage("--pubs is required"))?;
        let registry: Option<CategoryRegistry> = match self.config.cats.clone() {
            Some(path) => {
                let bytes = self.read_input(&path)?;
                Some(parse_registry(&bytes[..]).map_err(|e| AppError::from_ingest(&path, e))?)
            }
            None => None,
        };
        let bytes = self.read_input(&pubs)?;
        let mode = if self.config.strict {
            IngestMode::Strict
        } else {
            IngestMode::Lenient
        };
        let ingested = parse_publications(&bytes[..], InputFormat::from_path(&pubs), registry, mode)
            .map_err(|e| AppError::from_ingest(&pubs, e))?;
        for rejected in &ingested.rejected {
            warn!("{}: skipped row: {rejected}", pubs.display());
        }
        info!(
            "{}: {} publications, {} rows rejected",
            pubs.display(),
            ingested.corpus.len(),
            ingested.rejected.len()
        );
        Ok((ingested.corpus, ingested.rejected.len()))
    }

    fn reference_table(&mut self, corpus: &Corpus) -> Result<ReferenceTable, AppError> {
        let c = self.config;
        let partition = build_partition(corpus, &c.doc_type, c.years);
        if partition.admitted_count() == 0 {
            return Err(AppError::EmptyReport(format!(
                "no {:?} publications in {}-{}",
                c.doc_type,
                c.years.start(),
                c.years.end()
            )));
        }
        info!(
            "{} cells, {} admitted publications",
            partition.len(),
            partition.admitted_count()
        );
        let years: Vec<i32> = c.years.years().collect();
        build_reference_table(&partition, corpus, &years, &c.windows, c.css_k)
            .map_err(|e| AppError::Invalid(e.to_string()))
    }

    fn validate(&mut self) -> Result<(), AppError> {
        let (corpus, rejected) = self.load_corpus()?;
        let partition = build_partition(&corpus, &self.config.doc_type, self.config.years);
        println!("publications\t{}", corpus.len());
        println!("rejected_rows\t{rejected}");
        println!("categories\t{}", corpus.registry().len());
        println!("researchers\t{}", corpus.researcher_ids().len());
        println!("admitted\t{}", partition.admitted_count());
        println!("cells\t{}", partition.len());
        if rejected > 0 {
            return Err(AppError::Invalid(format!("{rejected} rows rejected")));
        }
        Ok(())
    }

    fn refvalues(&mut self) -> Result<(), AppError> {
        let (corpus, _) = self.load_corpus()?;
        let table = self.reference_table(&corpus)?;
        let spec = ReportSpec::new(ReportKind::ReferenceTable, self.config.format);
        let bytes = emit_reference_table(&table, &spec, &self.metadata)?;
        self.output(self.report_name("reference_table"), &bytes)
    }

    fn compare(&mut self) -> Result<(), AppError> {
        let c = self.config;
        let (table, years, windows) = match c.ref_table.clone() {
            Some(path) => {
                let bytes = self.read_input(&path)?;
                let format = match path.extension().and_then(|e| e.to_str()) {
                    Some("json") => ReportFormat::Json,
                    _ => ReportFormat::Csv,
                };
                let table = read_reference_table(&bytes[..], format)
                    .map_err(|e| AppError::Invalid(format!("{}: {e}", path.display())))?;
                let mut years: Vec<i32> = table.iter().map(|v| v.year).collect();
                let mut windows: Vec<CitationWindow> = table.iter().map(|v| v.window).collect();
                years.sort();
                years.dedup();
                windows.sort();
                windows.dedup();
                if c.is_explicit("years") {
                    years.retain(|y| c.years.contains(*y));
                }
                if c.is_explicit("windows") {
                    windows.retain(|w| c.windows.contains(w));
                }
                (table, years, windows)
            }
            None => {
                let (corpus, _) = self.load_corpus()?;
                let table = self.reference_table(&corpus)?;
                (table, c.years.years().collect(), c.windows.clone())
            }
        };
        if table.is_empty() {
            return Err(AppError::EmptyReport("reference table has no entries".into()));
        }

        let mut triples: Vec<AdjacentTriple> = Vec::new();
        for (i, j) in &c.triples {
            let known = table.contains_code(i) && table.contains_code(j);
            if !known {
                if c.triples_explicit {
                    let code = if table.contains_code(i) { j } else { i };
                    return Err(AppError::usage(format!("--triples {i}:{j}: unknown category code {code:?}")));
                }
                continue;
            }
            triples.push(adjacent_triples(i, j).expect("checked at resolve"));
        }

        let year_pairs = if c.is_explicit("year-pairs") {
            c.year_pairs.clone()
        } else {
            consecutive(&years)
        };
        let window_pairs = if c.is_explicit("window-pairs") {
            c.window_pairs.clone()
        } else {
            consecutive(&windows)
        };
        let cells: Vec<CellKey> = if triples.is_empty() {
            let mut cells: Vec<CellKey> = table.iter().map(|v| v.cell.clone()).collect();
            cells.dedup();
            cells
        } else {
            let mut cells: Vec<CellKey> = triples
                .iter()
                .flat_map(|t| [t.left.clone(), t.middle.clone(), t.right.clone()])
                .collect();
            cells.sort();
            cells.dedup();
            cells
        };

        let mut comparison = Comparison::default();
        for metric in [Metric::E, Metric::T] {
            comparison.extend(year_dimension_pairs(&table, &year_pairs, &cells, &windows, metric));
            comparison.extend(window_dimension_pairs(&table, &window_pairs, &cells, &years, metric));
            comparison.extend(cell_dimension_pairs(&table, &triples, &years, &windows, metric));
        }
        for skip in &comparison.skipped {
            warn!(
                "skipped {} {} {} vs {}: {}",
                skip.dimension, skip.metric, skip.left, skip.right, skip.reason
            );
        }
        if !comparison.skipped.is_empty() {
            warn!("{} comparisons skipped", comparison.skipped.len());
        }
        let summaries = summarize_all(&comparison.records);
        let spec = ReportSpec::new(ReportKind::DifferenceSummary, c.format);
        let report = emit_difference_summary(&comparison.records, &summaries, &spec, &self.metadata)?;
        self.output(self.report_name("differences"), &report.records)?;
        self.output(self.report_name("difference_summary"), &report.summary)
    }

    fn profile(&mut self) -> Result<(), AppError> {
        let (corpus, _) = self.load_corpus()?;
        let c = self.config;
        let partition = build_partition(&corpus, &c.doc_type, c.years);
        let ids: Vec<String> = if c.researchers.is_empty() {
            corpus.researcher_ids().into_iter().collect()
        } else {
            c.researchers.clone()
        };
        let mut profiles = Vec::new();
        for id in &ids {
            if !corpus.has_researcher(id) {
                warn!("unknown researcher {id:?} omitted");
                continue;
            }
            match researcher_profile(&corpus, &partition, id, c.years, c.window) {
                Ok(p) => profiles.push(p),
                Err(e) => warn!("researcher {id:?} omitted: {e}"),
            }
        }
        if profiles.is_empty() {
            return Err(AppError::EmptyReport("no researcher could be profiled".into()));
        }
        let spec = ReportSpec::new(ReportKind::ProfileMatrix, c.format);
        let bytes = emit_profile_matrix(&profiles, &spec, &self.metadata)?;
        self.output(self.report_name("profile_matrix"), &bytes)
    }

    fn generate(&mut self) -> Result<(), AppError> {
        let path = self
            .config
            .spec
            .clone()
            .ok_or_else(|| AppError::usage("--spec is required"))?;
        let bytes = self.read_input(&path)?;
        let text = String::from_utf8(bytes)
            .map_err(|_| AppError::usage(format!("{}: not UTF-8", path.display())))?;
        let spec = GeneratorSpec::from_toml(&text)?;
        let corpus = generate_synthetic_corpus(&spec, self.config.seed)?;
        info!("generated {} publications", corpus.len());

        let (name, format) = match self.config.format {
            ReportFormat::Csv => ("publications.csv", InputFormat::Csv),
            ReportFormat::Json => ("publications.jsonl", InputFormat::Jsonl),
        };
        let mut pubs = Vec::new();
        write_publications(&corpus, format, &mut pubs).expect("in-memory write");
        self.output(name.into(), &pubs)?;
        let mut cats = Vec::new();
        write_registry(corpus.registry(), &mut cats).expect("in-memory write");
        self.output("categories.csv".into(), &cats)
    }

    fn write_manifest(&mut self) -> Result<(), AppError> {
        let manifest = Manifest {
            toolkit_version: &self.metadata.toolkit_version,
            command: self.config.command.as_str(),
            parameters: &self.metadata.parameters,
            inputs: &self.metadata.input_digests,
            outputs: &self.outputs,
        };
        let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        bytes.push(b'\n');
        let name = format!("{}_manifest.json", self.config.command.as_str());
        let path = self.config.out_dir.join(&name);
        write_report(&path, &bytes)?;
        Ok(())
    }
}
