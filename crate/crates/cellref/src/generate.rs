//! Deterministic synthetic corpora.
//!
//! A generator spec (TOML) declares categories, cells with weights and
//! citation rates, article counts per year and a researcher count. Cell
//! counts per year are allocated by largest remainder, so shares match the
//! weights up to one article. Each article draws a log-normal impact
//! multiplier (stratified over the cell, mean one) and Poisson citations per
//! year following an ageing profile. `[[calibrated]]` blocks add cells whose
//! `e` and `T` reproduce given targets exactly.
//!
//! ```toml
//! researchers = 4
//!
//! [[cells]]
//! key = "M"
//! weight = 0.8
//! mean_citations = 2.8   # expected citations within `rate_window` years
//!
//! [[years]]
//! year = 2005
//! articles = 1000
//!
//! [[calibrated]]
//! cell = "M;MA"
//! year = 2005
//! articles = 4322
//! windows = [3, 4, 5]
//! e = [1.3, 2.2, 3.2]
//! t = [6.3, 11.6, 15.9]
//! ```

use std::collections::BTreeMap;

use cellref_core::calibrate::{calibrated_counts, yearly_citations, WindowTarget};
use cellref_core::{CategoryRegistry, CellKey, CitationWindow, Corpus, PublicationRecord, SubjectCategory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, GenerateError> {
    Err(GenerateError::InvalidSpec(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default = "default_doc_type")]
    pub doc_type: String,
    #[serde(default)]
    pub researchers: usize,
    /// Years of citations generated per article, publication year included.
    #[serde(default = "default_horizon")]
    pub citation_horizon: u32,
    /// Sigma of the log-normal impact multiplier; zero gives pure Poisson.
    #[serde(default = "default_dispersion")]
    pub dispersion: f64,
    /// Relative citation intensity by years since publication; the last
    /// value repeats.
    #[serde(default = "default_ageing")]
    pub ageing: Vec<f64>,
    #[serde(default)]
    pub categories: Vec<CategorySpec>,
    #[serde(default)]
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub years: Vec<YearSpec>,
    #[serde(default)]
    pub calibrated: Vec<CalibratedSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub code: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub key: String,
    pub weight: f64,
    pub mean_citations: f64,
    #[serde(default = "default_rate_window")]
    pub rate_window: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YearSpec {
    pub year: i32,
    pub articles: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibratedSpec {
    pub cell: String,
    pub year: i32,
    pub articles: usize,
    pub windows: Vec<u32>,
    pub e: Vec<f64>,
    pub t: Vec<f64>,
}

fn default_doc_type() -> String {
    "article".into()
}
fn default_horizon() -> u32 {
    6
}
fn default_dispersion() -> f64 {
    1.0
}
fn default_ageing() -> Vec<f64> {
    vec![0.4, 1.0, 1.2, 1.2, 1.1, 1.0]
}
fn default_rate_window() -> u32 {
    5
}

impl GeneratorSpec {
    pub fn from_toml(text: &str) -> Result<Self, GenerateError> {
        toml::from_str(text).map_err(|e| GenerateError::InvalidSpec(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("generator spec serializes")
    }
}

struct PreparedCell {
    key: CellKey,
    weight: f64,
    mean: f64,
    rate_window: u32,
}

/// Builds the corpus described by `spec`; identical `(spec, seed)` give
/// identical corpora.
pub fn generate_synthetic_corpus(spec: &GeneratorSpec, seed: u64) -> Result<Corpus, GenerateError> {
    let (registry, cells) = prepare(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Corpus::new(registry);
    let mut next_id = 0usize;
    let push = |corpus: &mut Corpus, record: PublicationRecord| -> Result<(), GenerateError> {
        corpus
            .insert(record)
            .map_err(|e| GenerateError::InvalidSpec(e.to_string()))
    };
    let mut new_id = || {
        next_id += 1;
        format!("P{next_id:07}")
    };

    let homes: Vec<usize> = (0..spec.researchers)
        .map(|r| if cells.is_empty() { 0 } else { r % cells.len() })
        .collect();

    let mut years = spec.years.clone();
    years.sort_by_key(|y| y.year);
    let weights: Vec<f64> = cells.iter().map(|c| c.weight).collect();
    for year in &years {
        let counts = largest_remainder(year.articles, &weights);
        for (cell_index, (cell, &count)) in cells.iter().zip(&counts).enumerate() {
            let multipliers = impact_multipliers(count, spec.dispersion, &mut rng);
            let ageing_total: f64 = (0..cell.rate_window).map(|k| ageing(spec, k)).sum();
            for multiplier in multipliers {
                let mut citations = Vec::new();
                for k in 0..spec.citation_horizon {
                    let lambda = cell.mean * ageing(spec, k) / ageing_total * multiplier;
                    let count = if lambda > 0.0 {
                        Poisson::new(lambda)
                            .map_err(|e| GenerateError::InvalidSpec(e.to_string()))?
                            .sample(&mut rng) as u32
                    } else {
                        0
                    };
                    if count > 0 {
                        citations.push((year.year + k as i32, count));
                    }
                }
                let record = PublicationRecord::new(new_id(), year.year, &spec.doc_type)
                    .with_categories(cell.key.codes().iter().cloned())
                    .with_citations(citations)
                    .with_authors(pick_author(&homes, cell_index, &mut rng));
                push(&mut corpus, record)?;
            }
        }
    }

    for block in &spec.calibrated {
        let key: CellKey = block
            .cell
            .parse()
            .map_err(|e: cellref_core::Error| GenerateError::InvalidSpec(e.to_string()))?;
        let windows = block
            .windows
            .iter()
            .map(|&w| CitationWindow::new(w))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| GenerateError::InvalidSpec(e.to_string()))?;
        let targets: Vec<WindowTarget> = windows
            .iter()
            .zip(&block.e)
            .zip(&block.t)
            .map(|((&window, &mean), &threshold)| WindowTarget {
                window,
                mean,
                threshold,
            })
            .collect();
        let counts = calibrated_counts(block.articles, &targets)
            .map_err(|e| GenerateError::InvalidSpec(e.to_string()))?;
        let cell_index = cells.iter().position(|c| c.key == key).unwrap_or(usize::MAX);
        for rank in 0..block.articles {
            let cumulative: Vec<u64> = counts.iter().map(|c| c[rank]).collect();
            let citations = yearly_citations(block.year, &windows, &cumulative)
                .into_iter()
                .map(|(y, c)| {
                    u32::try_from(c)
                        .map(|c| (y, c))
                        .map_err(|_| GenerateError::InvalidSpec("citation count overflow".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let record = PublicationRecord::new(new_id(), block.year, &spec.doc_type)
                .with_categories(key.codes().iter().cloned())
                .with_citations(citations)
                .with_authors(pick_author(&homes, cell_index, &mut rng));
            push(&mut corpus, record)?;
        }
    }
    Ok(corpus)
}

fn prepare(spec: &GeneratorSpec) -> Result<(CategoryRegistry, Vec<PreparedCell>), GenerateError> {
    let mut registry = CategoryRegistry::new();
    for c in &spec.categories {
        SubjectCategory::new(&c.code, &c.name)
            .and_then(|c| registry.insert(c))
            .map_err(|e| GenerateError::InvalidSpec(e.to_string()))?;
    }
    let declared = !spec.categories.is_empty();

    if spec.cells.is_empty() && spec.calibrated.is_empty() {
        return invalid("no cells or calibrated blocks");
    }
    if !spec.cells.is_empty() && spec.years.is_empty() {
        return invalid("cells need at least one [[years]] entry");
    }
    if spec.years.iter().any(|y| y.articles == 0) {
        return invalid("article counts must be positive");
    }
    if spec.calibrated.iter().any(|c| c.articles == 0) {
        return invalid("calibrated article counts must be positive");
    }
    if spec.citation_horizon == 0 {
        return invalid("citation_horizon must be positive");
    }
    if !(spec.dispersion >= 0.0 && spec.dispersion.is_finite()) {
        return invalid("dispersion must be finite and non-negative");
    }
    if spec.ageing.is_empty() || spec.ageing.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
        return invalid("ageing must be a non-empty list of non-negative numbers");
    }

    let mut cells = Vec::new();
    let mut all_keys = Vec::new();
    for c in &spec.cells {
        if !(c.weight > 0.0 && c.weight.is_finite()) {
            return invalid(format!("cell {}: weight must be positive", c.key));
        }
        if !(c.mean_citations >= 0.0 && c.mean_citations.is_finite()) {
            return invalid(format!("cell {}: mean_citations must be non-negative", c.key));
        }
        if c.rate_window == 0 {
            return invalid(format!("cell {}: rate_window must be positive", c.key));
        }
        let key: CellKey = c
            .key
            .parse()
            .map_err(|e: cellref_core::Error| GenerateError::InvalidSpec(e.to_string()))?;
        if cells.iter().any(|p: &PreparedCell| p.key == key) {
            return invalid(format!("cell {key} listed twice"));
        }
        if c.mean_citations > 0.0 && (0..c.rate_window).map(|k| ageing(spec, k)).sum::<f64>() <= 0.0 {
            return invalid(format!("cell {key}: ageing profile is zero over the rate window"));
        }
        all_keys.push(key.clone());
        cells.push(PreparedCell {
            key,
            weight: c.weight,
            mean: c.mean_citations,
            rate_window: c.rate_window,
        });
    }
    for c in &spec.calibrated {
        if c.windows.len() != c.e.len() || c.windows.len() != c.t.len() {
            return invalid(format!("calibrated {}: windows, e and t differ in length", c.cell));
        }
        all_keys.push(
            c.cell
                .parse()
                .map_err(|e: cellref_core::Error| GenerateError::InvalidSpec(e.to_string()))?,
        );
    }
    for key in &all_keys {
        for code in key.codes() {
            if declared && !registry.contains(code) {
                return invalid(format!("cell {key} uses undeclared category {code}"));
            }
            registry
                .ensure(code)
                .map_err(|e| GenerateError::InvalidSpec(e.to_string()))?;
        }
    }
    Ok((registry, cells))
}

fn ageing(spec: &GeneratorSpec, years_since: u32) -> f64 {
    let i = (years_since as usize).min(spec.ageing.len() - 1);
    spec.ageing[i]
}

/// Integer counts proportional to `weights` summing to `total`; ties in the
/// remainders go to the earlier cell.
pub fn largest_remainder(total: usize, weights: &[f64]) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if weights.is_empty() || sum <= 0.0 {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut left = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (quotas[a] - quotas[a].floor(), quotas[b] - quotas[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

/// Log-normal multipliers with mean one, one per stratum of the unit
/// interval, in shuffled order.
fn impact_multipliers(count: usize, sigma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![1.0; count];
    }
    let normal = Normal::standard();
    let mut out: Vec<f64> = (0..count)
        .map(|i| {
            let u = (i as f64 + rng.random::<f64>()) / count as f64;
            let z = normal.inverse_cdf(u.clamp(1e-12, 1.0 - 1e-12));
            (sigma * z - sigma * sigma / 2.0).exp()
        })
        .collect();
    out.shuffle(rng);
    out
}

/// Researcher ids are `R001`, `R002`, ...; researcher `r` is based in cell
/// `r mod cells` and authors most of its articles there.
fn pick_author(homes: &[usize], cell_index: usize, rng: &mut ChaCha8Rng) -> Option<String> {
    if homes.is_empty() {
        return None;
    }
    let local: Vec<usize> = (0..homes.len()).filter(|&r| homes[r] == cell_index).collect();
    let r = if !local.is_empty() && rng.random_bool(0.8) {
        local[rng.random_range(0..local.len())]
    } else {
        rng.random_range(0..homes.len())
    };
    Some(format!("R{:03}", r + 1))
}

/// Per-cell counts of a corpus, used by tests and diagnostics.
pub fn cell_counts(corpus: &Corpus) -> BTreeMap<CellKey, usize> {
    let mut out = BTreeMap::new();
    for p in corpus.iter() {
        if let Ok(key) = p.cell_key() {
            *out.entry(key).or_default() += 1;
        }
    }
    out
}
