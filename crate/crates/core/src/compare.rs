//! Absolute relative differences between reference values.
//!
//! Pairs are compared along three dimensions: successive publication years,
//! successive citation window lengths, and adjacent cells of a triple
//! (`i` alone, `i` and `j`, `j` alone). Pairs with a missing or
//! non-positive side are skipped and reported, not treated as errors.

use alloc::vec::Vec;
use core::fmt;

use crate::category::{AdjacentTriple, CellKey};
use crate::error::{Error, Result};
use crate::metrics::{CitationWindow, ReferenceTable, ReferenceValues};

/// `2 |x - y| / (x + y)` for positive `x` and `y`; symmetric, in `[0, 2)`.
pub fn relative_difference(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if v.is_nan() || v <= 0.0 || v.is_infinite() {
            return Err(Error::NonPositiveValue(v));
        }
    }
    Ok(2.0 * libm::fabs(x - y) / (x + y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    PublicationYear,
    WindowLength,
    AdjacentCell,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [
        Dimension::PublicationYear,
        Dimension::WindowLength,
        Dimension::AdjacentCell,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::PublicationYear => "publication_year",
            Dimension::WindowLength => "window_length",
            Dimension::AdjacentCell => "adjacent_cell",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which reference value is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// Mean expected citations per article.
    E,
    /// Outstanding threshold.
    T,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::E, Metric::T];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::E => "e",
            Metric::T => "t",
        }
    }

    pub fn value(&self, values: &ReferenceValues) -> f64 {
        match self {
            Metric::E => values.e,
            Metric::T => values.t,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A `(cell, year, window)` coordinate in a reference table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RefContext {
    pub cell: CellKey,
    pub year: i32,
    pub window: CitationWindow,
}

impl RefContext {
    pub fn new(cell: CellKey, year: i32, window: CitationWindow) -> Self {
        Self { cell, year, window }
    }
}

impl fmt::Display for RefContext {
    /// `cell/year/wN`, e.g. `M;MA/2005/w3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/w{}", self.cell, self.year, self.window)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceRecord {
    pub dimension: Dimension,
    pub metric: Metric,
    pub left: RefContext,
    pub right: RefContext,
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    MissingLeft,
    MissingRight,
    MissingBoth,
    NonPositive,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::MissingLeft => "left reference value missing",
            SkipReason::MissingRight => "right reference value missing",
            SkipReason::MissingBoth => "both reference values missing",
            SkipReason::NonPositive => "reference value not positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedComparison {
    pub dimension: Dimension,
    pub metric: Metric,
    pub left: RefContext,
    pub right: RefContext,
    pub reason: SkipReason,
}

/// Records of one comparison run plus the pairs that were skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Comparison {
    pub records: Vec<DifferenceRecord>,
    pub skipped: Vec<SkippedComparison>,
}

impl Comparison {
    pub fn extend(&mut self, other: Comparison) {
        self.records.extend(other.records);
        self.skipped.extend(other.skipped);
        self.sort();
    }

    fn sort(&mut self) {
        self.records.sort_by(|a, b| {
            (a.dimension, a.metric, &a.left, &a.right).cmp(&(b.dimension, b.metric, &b.left, &b.right))
        });
        self.skipped.sort_by(|a, b| {
            (a.dimension, a.metric, &a.left, &a.right).cmp(&(b.dimension, b.metric, &b.left, &b.right))
        });
    }

    fn compare(
        &mut self,
        table: &ReferenceTable,
        dimension: Dimension,
        metric: Metric,
        left: RefContext,
        right: RefContext,
    ) {
        let lv = table.get(&left.cell, left.year, left.window);
        let rv = table.get(&right.cell, right.year, right.window);
        let reason = match (lv, rv) {
            (None, None) => Some(SkipReason::MissingBoth),
            (None, Some(_)) => Some(SkipReason::MissingLeft),
            (Some(_), None) => Some(SkipReason::MissingRight),
            (Some(l), Some(r)) => match relative_difference(metric.value(l), metric.value(r)) {
                Ok(value) => {
                    self.records.push(DifferenceRecord {
                        dimension,
                        metric,
                        x: metric.value(l),
                        y: metric.value(r),
                        r: value,
                        left,
                        right,
                    });
                    return;
                }
                Err(_) => Some(SkipReason::NonPositive),
            },
        };
        if let Some(reason) = reason {
            self.skipped.push(SkippedComparison {
                dimension,
                metric,
                left,
                right,
                reason,
            });
        }
    }
}

pub fn year_dimension_pairs(
    table: &ReferenceTable,
    year_pairs: &[(i32, i32)],
    cells: &[CellKey],
    windows: &[CitationWindow],
    metric: Metric,
) -> Comparison {
    let mut out = Comparison::default();
    for cell in cells {
        for &window in windows {
            for &(a, b) in year_pairs {
                out.compare(
                    table,
                    Dimension::PublicationYear,
                    metric,
                    RefContext::new(cell.clone(), a, window),
                    RefContext::new(cell.clone(), b, window),
                );
            }
        }
    }
    out.sort();
    out
}

pub fn window_dimension_pairs(
    table: &ReferenceTable,
    window_pairs: &[(CitationWindow, CitationWindow)],
    cells: &[CellKey],
    years: &[i32],
    metric: Metric,
) -> Comparison {
    let mut out = Comparison::default();
    for cell in cells {
        for &year in years {
            for &(a, b) in window_pairs {
                out.compare(
                    table,
                    Dimension::WindowLength,
                    metric,
                    RefContext::new(cell.clone(), year, a),
                    RefContext::new(cell.clone(), year, b),
                );
            }
        }
    }
    out.sort();
    out
}

/// Two pairs per triple: `(left, middle)` and `(middle, right)`.
pub fn cell_dimension_pairs(
    table: &ReferenceTable,
    triples: &[AdjacentTriple],
    years: &[i32],
    windows: &[CitationWindow],
    metric: Metric,
) -> Comparison {
    let mut out = Comparison::default();
    for triple in triples {
        for (a, b) in triple.pairs() {
            for &year in years {
                for &window in windows {
                    out.compare(
                        table,
                        Dimension::AdjacentCell,
                        metric,
                        RefContext::new(a.clone(), year, window),
                        RefContext::new(b.clone(), year, window),
                    );
                }
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionSummary {
    pub dimension: Dimension,
    pub metric: Metric,
    pub count: usize,
    pub min_r: f64,
    pub max_r: f64,
}

/// Range of `r` over records sharing one `(dimension, metric)`.
pub fn summarize_dimension(records: &[DifferenceRecord]) -> Result<DimensionSummary> {
    let first = records.first().ok_or(Error::EmptyDistribution)?;
    let mut summary = DimensionSummary {
        dimension: first.dimension,
        metric: first.metric,
        count: 0,
        min_r: f64::INFINITY,
        max_r: f64::NEG_INFINITY,
    };
    for record in records {
        if (record.dimension, record.metric) != (first.dimension, first.metric) {
            return Err(Error::MixedDimensions {
                first: first.dimension,
                first_metric: first.metric,
                other: record.dimension,
                other_metric: record.metric,
            });
        }
        summary.count += 1;
        summary.min_r = summary.min_r.min(record.r);
        summary.max_r = summary.max_r.max(record.r);
    }
    Ok(summary)
}

/// One summary per `(dimension, metric)` present, in that order.
pub fn summarize_all(records: &[DifferenceRecord]) -> Vec<DimensionSummary> {
    let mut out = Vec::new();
    for dimension in Dimension::ALL {
        for metric in Metric::ALL {
            let group: Vec<DifferenceRecord> = records
                .iter()
                .filter(|r| r.dimension == dimension && r.metric == metric)
                .cloned()
                .collect();
            if let Ok(summary) = summarize_dimension(&group) {
                out.push(summary);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::adjacent_triples;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        libm::fabs(a - b) <= tol
    }

    fn w(n: u32) -> CitationWindow {
        CitationWindow::new(n).unwrap()
    }

    #[test]
    fn relative_difference_examples() {
        assert!(close(relative_difference(2.0, 2.8).unwrap(), 0.3333, 0.0001));
        assert!(close(relative_difference(6.1, 8.3).unwrap(), 0.3056, 0.0001));
        assert_eq!(relative_difference(3.7, 3.7).unwrap(), 0.0);
        assert_eq!(relative_difference(0.0, 1.0), Err(Error::NonPositiveValue(0.0)));
        assert!(relative_difference(1.0, -2.0).is_err());
        assert!(relative_difference(f64::NAN, 1.0).is_err());
    }

    fn entry(cell: &str, year: i32, window: u32, e: f64, t: f64) -> ReferenceValues {
        ReferenceValues::from_values(cell.parse().unwrap(), year, w(window), 100, e, t, None)
            .unwrap()
    }

    #[test]
    fn skips_missing_and_zero() {
        let table: ReferenceTable = [
            entry("M", 2005, 3, 1.2, 6.1),
            entry("M", 2006, 3, 0.0, 0.0),
            entry("MA", 2005, 3, 2.0, 8.2),
        ]
        .into_iter()
        .collect();
        let cells = vec!["M".parse().unwrap()];
        let c = year_dimension_pairs(&table, &[(2005, 2006), (2006, 2007)], &cells, &[w(3)], Metric::E);
        assert!(c.records.is_empty());
        assert_eq!(c.skipped.len(), 2);
        assert_eq!(c.skipped[0].reason, SkipReason::NonPositive);
        assert_eq!(c.skipped[1].reason, SkipReason::MissingRight);

        let triple = adjacent_triples("M", "MA").unwrap();
        let c = cell_dimension_pairs(&table, &[triple], &[2005], &[w(3)], Metric::T);
        assert_eq!(c.skipped.len(), 2);
        assert!(c.records.is_empty());
    }

    #[test]
    fn window_pairs_label_contexts() {
        let table: ReferenceTable = [
            entry("M", 2005, 3, 1.2, 6.1),
            entry("M", 2005, 4, 2.0, 8.3),
        ]
        .into_iter()
        .collect();
        let c = window_dimension_pairs(
            &table,
            &[(w(3), w(4))],
            &["M".parse().unwrap()],
            &[2005],
            Metric::E,
        );
        assert_eq!(c.records.len(), 1);
        let rec = &c.records[0];
        assert_eq!(alloc::format!("{}", rec.left), "M/2005/w3");
        assert_eq!((rec.x, rec.y), (1.2, 2.0));
        assert!(close(rec.r, 0.5, 1e-12));
    }

    fn rec(dimension: Dimension, metric: Metric, r: f64) -> DifferenceRecord {
        let ctx = RefContext::new("M".parse().unwrap(), 2005, w(3));
        DifferenceRecord {
            dimension,
            metric,
            left: ctx.clone(),
            right: ctx,
            x: 1.0,
            y: 1.0,
            r,
        }
    }

    #[test]
    fn summaries() {
        let one = summarize_dimension(&[rec(Dimension::AdjacentCell, Metric::E, 0.1)]).unwrap();
        assert_eq!((one.count, one.min_r, one.max_r), (1, 0.1, 0.1));

        let records = vec![
            rec(Dimension::WindowLength, Metric::T, 0.0),
            rec(Dimension::WindowLength, Metric::T, 0.5),
            rec(Dimension::WindowLength, Metric::T, 2.0 * 0.9 / 1.1),
        ];
        let s = summarize_dimension(&records).unwrap();
        assert_eq!(s.min_r, 0.0);
        assert!(close(s.max_r, 1.6364, 0.0001));
        assert_eq!(s.count, 3);

        assert_eq!(summarize_dimension(&[]), Err(Error::EmptyDistribution));
        let mixed = vec![
            rec(Dimension::WindowLength, Metric::T, 0.0),
            rec(Dimension::WindowLength, Metric::E, 0.0),
        ];
        assert!(matches!(
            summarize_dimension(&mixed),
            Err(Error::MixedDimensions { .. })
        ));
        assert_eq!(summarize_all(&mixed).len(), 2);
    }
}
