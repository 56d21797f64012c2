//! Citation counts per window and per-cell reference values.
//!
//! For one cell, publication year and window the reference values are the
//! article count `n`, the mean expected citation rate `e` and the outstanding
//! threshold `T`. `T` comes from Characteristic Scores and Scales: `b_1` is
//! the mean of the distribution and every further score is the mean of the
//! values at or above the previous one. With the default `k = 3` the
//! threshold is `b_3`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::category::CellKey;
use crate::corpus::{Corpus, PublicationRecord};
use crate::error::{Error, Result};
use crate::partition::CellPartition;

/// Number of CSS scores computed by default; `T` is the last one.
pub const DEFAULT_CSS_K: usize = 3;

/// Whole calendar years, starting at and including the publication year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CitationWindow(u32);

impl CitationWindow {
    pub fn new(length_years: u32) -> Result<Self> {
        if length_years == 0 {
            return Err(Error::InvalidWindow);
        }
        Ok(Self(length_years))
    }

    pub fn length_years(&self) -> u32 {
        self.0
    }

    /// Last calendar year counted for a publication of `year`.
    pub fn last_year(&self, year: i32) -> i32 {
        year.saturating_add(self.0 as i32 - 1)
    }
}

impl fmt::Display for CitationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Citations received in calendar years `[year, year + window - 1]`.
pub fn citation_count(publication: &PublicationRecord, window: CitationWindow) -> u64 {
    publication
        .citations_by_year
        .range(publication.year..=window.last_year(publication.year))
        .map(|(_, &c)| u64::from(c))
        .sum()
}

/// Window counts of the cell's publications from `year`, in ascending
/// `pub_id` order.
pub fn cell_distribution(
    partition: &CellPartition,
    corpus: &Corpus,
    cell: &CellKey,
    year: i32,
    window: CitationWindow,
) -> Vec<u64> {
    let Some(ids) = partition.get(cell) else {
        return Vec::new();
    };
    ids.iter()
        .filter_map(|id| corpus.get(id))
        .filter(|p| p.year == year)
        .map(|p| citation_count(p, window))
        .collect()
}

fn mean_of(values: &[u64]) -> f64 {
    let sum: u128 = values.iter().map(|&v| u128::from(v)).sum();
    sum as f64 / values.len() as f64
}

pub fn mean_expected_citations(distribution: &[u64]) -> Result<f64> {
    if distribution.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(mean_of(distribution))
}

/// Characteristic scores `b_1 ..= b_k`, non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CssScores {
    scores: Vec<f64>,
}

impl CssScores {
    /// Wraps precomputed scores, e.g. read back from an exported table.
    pub fn from_scores(scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::InvalidCssK);
        }
        if scores.iter().any(|s| !s.is_finite() || *s < 0.0)
            || scores.windows(2).any(|w| w[0] > w[1])
        {
            return Err(Error::InvalidReferenceValues(
                "CSS scores must be finite, non-negative and non-decreasing",
            ));
        }
        Ok(Self { scores })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn k(&self) -> usize {
        self.scores.len()
    }

    /// The highest score, used as the outstanding threshold.
    pub fn threshold(&self) -> f64 {
        *self.scores.last().expect("at least one score")
    }
}

/// Iterated truncated means with non-strict truncation. Once the retained
/// subset stops changing, the remaining scores repeat the fixed value.
pub fn css_scores(distribution: &[u64], k: usize) -> Result<CssScores> {
    if k == 0 {
        return Err(Error::InvalidCssK);
    }
    if distribution.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut sorted = distribution.to_vec();
    sorted.sort_unstable();

    // suffix[i] = sum of sorted[i..]
    let mut suffix = Vec::with_capacity(sorted.len() + 1);
    suffix.push(0u128);
    for &v in sorted.iter().rev() {
        let last = *suffix.last().unwrap();
        suffix.push(last + u128::from(v));
    }
    suffix.reverse();

    let n = sorted.len();
    let mut start = 0;
    let mut score = suffix[0] as f64 / n as f64;
    let mut scores = Vec::with_capacity(k);
    scores.push(score);
    for _ in 1..k {
        let next = start + sorted[start..].partition_point(|&v| (v as f64) < score);
        if next != start {
            start = next;
            score = suffix[start] as f64 / (n - start) as f64;
        }
        scores.push(score);
    }
    Ok(CssScores { scores })
}

/// `T`: the last of `k` CSS scores.
pub fn outstanding_threshold(distribution: &[u64], k: usize) -> Result<f64> {
    css_scores(distribution, k).map(|css| css.threshold())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValues {
    pub cell: CellKey,
    pub year: i32,
    pub window: CitationWindow,
    pub n: usize,
    pub e: f64,
    /// Absent when the values were imported without their CSS scores.
    pub css: Option<CssScores>,
    pub t: f64,
}

impl ReferenceValues {
    /// Reference values computed from a non-empty distribution.
    pub fn from_distribution(
        cell: CellKey,
        year: i32,
        window: CitationWindow,
        distribution: &[u64],
        k: usize,
    ) -> Result<Self> {
        let e = mean_expected_citations(distribution)?;
        let css = css_scores(distribution, k)?;
        Ok(Self {
            cell,
            year,
            window,
            n: distribution.len(),
            e,
            t: css.threshold(),
            css: Some(css),
        })
    }

    /// Reference values given directly, e.g. from a published table.
    pub fn from_values(
        cell: CellKey,
        year: i32,
        window: CitationWindow,
        n: usize,
        e: f64,
        t: f64,
        css: Option<CssScores>,
    ) -> Result<Self> {
        let values = Self {
            cell,
            year,
            window,
            n,
            e,
            css,
            t,
        };
        values.validate()?;
        Ok(values)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidReferenceValues("n must be at least 1"));
        }
        if !(self.e.is_finite() && self.t.is_finite()) || self.e < 0.0 || self.t < 0.0 {
            return Err(Error::InvalidReferenceValues(
                "e and T must be finite and non-negative",
            ));
        }
        if self.t < self.e {
            return Err(Error::InvalidReferenceValues("T must not be below e"));
        }
        Ok(())
    }

    pub fn key(&self) -> (CellKey, i32, CitationWindow) {
        (self.cell.clone(), self.year, self.window)
    }
}

/// Reference values keyed by `(cell, year, window)`. Empty combinations have
/// no entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    entries: BTreeMap<(CellKey, i32, CitationWindow), ReferenceValues>,
}

impl ReferenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the entry for the values' key.
    pub fn insert(&mut self, values: ReferenceValues) -> Option<ReferenceValues> {
        self.entries.insert(values.key(), values)
    }

    pub fn remove(
        &mut self,
        cell: &CellKey,
        year: i32,
        window: CitationWindow,
    ) -> Option<ReferenceValues> {
        self.entries.remove(&(cell.clone(), year, window))
    }

    pub fn get(&self, cell: &CellKey, year: i32, window: CitationWindow) -> Option<&ReferenceValues> {
        self.entries.get(&(cell.clone(), year, window))
    }

    fn require(&self, cell: &CellKey, year: i32, window: CitationWindow) -> Result<&ReferenceValues> {
        self.get(cell, year, window)
            .ok_or_else(|| Error::MissingReference {
                cell: cell.to_string(),
                year,
                window: window.length_years(),
            })
    }

    /// Entries sorted by `(cell, year, window)`.
    pub fn iter(&self) -> impl Iterator<Item = &ReferenceValues> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_code(&self, code: &str) -> bool {
        self.entries.keys().any(|(cell, _, _)| cell.contains(code))
    }
}

impl FromIterator<ReferenceValues> for ReferenceTable {
    fn from_iter<I: IntoIterator<Item = ReferenceValues>>(iter: I) -> Self {
        let mut table = Self::new();
        for values in iter {
            table.insert(values);
        }
        table
    }
}

/// One entry per populated `(cell, year, window)` over the requested years
/// and windows.
pub fn build_reference_table(
    partition: &CellPartition,
    corpus: &Corpus,
    years: &[i32],
    windows: &[CitationWindow],
    k: usize,
) -> Result<ReferenceTable> {
    if k == 0 {
        return Err(Error::InvalidCssK);
    }
    let mut table = ReferenceTable::new();
    for (cell, ids) in partition.cells() {
        let mut by_year: BTreeMap<i32, Vec<&PublicationRecord>> = BTreeMap::new();
        for record in ids.iter().filter_map(|id| corpus.get(id)) {
            if years.contains(&record.year) {
                by_year.entry(record.year).or_default().push(record);
            }
        }
        for (&year, records) in &by_year {
            for &window in windows {
                let distribution: Vec<u64> =
                    records.iter().map(|p| citation_count(p, window)).collect();
                table.insert(ReferenceValues::from_distribution(
                    cell.clone(),
                    year,
                    window,
                    &distribution,
                    k,
                )?);
            }
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedScore {
    pub pub_id: String,
    pub observed: u64,
    pub expected: f64,
    pub ratio: f64,
}

/// Window count of `publication` divided by `e` of its own cell, year and
/// window.
pub fn normalized_citation_score(
    publication: &PublicationRecord,
    table: &ReferenceTable,
    window: CitationWindow,
) -> Result<NormalizedScore> {
    let cell = publication.cell_key()?;
    let reference = table.require(&cell, publication.year, window)?;
    if reference.e <= 0.0 {
        return Err(Error::ZeroExpectation {
            cell: cell.to_string(),
            year: publication.year,
            window: window.length_years(),
        });
    }
    let observed = citation_count(publication, window);
    Ok(NormalizedScore {
        pub_id: publication.pub_id.clone(),
        observed,
        expected: reference.e,
        ratio: observed as f64 / reference.e,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    MeanOfRatios,
    RatioOfSums,
}

pub fn aggregate_normalized(scores: &[NormalizedScore], mode: Aggregation) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(match mode {
        Aggregation::MeanOfRatios => {
            scores.iter().map(|s| s.ratio).sum::<f64>() / scores.len() as f64
        }
        Aggregation::RatioOfSums => {
            let observed: u128 = scores.iter().map(|s| u128::from(s.observed)).sum();
            let expected: f64 = scores.iter().map(|s| s.expected).sum();
            observed as f64 / expected
        }
    })
}

/// True iff the window count reaches `T` of the publication's cell, year and
/// window (boundary counts qualify).
pub fn flag_highly_cited(
    publication: &PublicationRecord,
    table: &ReferenceTable,
    window: CitationWindow,
) -> Result<bool> {
    let cell = publication.cell_key()?;
    let reference = table.require(&cell, publication.year, window)?;
    Ok(citation_count(publication, window) as f64 >= reference.t)
}
