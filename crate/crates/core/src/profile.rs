//! Distribution of a researcher's articles over partition cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};

use crate::category::CellKey;
use crate::corpus::{Corpus, YearRange};
use crate::error::{Error, Result};
use crate::metrics::{citation_count, CitationWindow};
use crate::partition::CellPartition;

#[derive(Debug, Clone, PartialEq)]
pub struct ResearcherProfile {
    pub researcher_id: String,
    pub n_articles: usize,
    pub counts: BTreeMap<CellKey, usize>,
    /// Fraction of the researcher's articles per cell.
    pub shares: BTreeMap<CellKey, f64>,
    /// Every cell attaining the maximum share; ties are all kept.
    pub top_cells: BTreeSet<CellKey>,
    /// Mean window count over the researcher's articles, all years jointly.
    pub mean_citations: f64,
}

impl ResearcherProfile {
    pub fn share(&self, cell: &CellKey) -> f64 {
        self.shares.get(cell).copied().unwrap_or(0.0)
    }

    pub fn is_top(&self, cell: &CellKey) -> bool {
        self.top_cells.contains(cell)
    }
}

/// Profile over the researcher's admitted articles published in `period`.
pub fn researcher_profile(
    corpus: &Corpus,
    partition: &CellPartition,
    researcher_id: &str,
    period: YearRange,
    window: CitationWindow,
) -> Result<ResearcherProfile> {
    let mut counts: BTreeMap<CellKey, usize> = BTreeMap::new();
    let mut citations: u128 = 0;
    let mut n_articles = 0usize;
    for record in corpus.iter() {
        if !record.author_ids.contains(researcher_id) || !period.contains(record.year) {
            continue;
        }
        let Some(cell) = partition.cell_of(&record.pub_id) else {
            continue;
        };
        *counts.entry(cell.clone()).or_default() += 1;
        citations += u128::from(citation_count(record, window));
        n_articles += 1;
    }
    if n_articles == 0 {
        return Err(Error::EmptyProfile(researcher_id.to_string()));
    }
    let max = counts.values().copied().max().unwrap_or(0);
    let top_cells = counts
        .iter()
        .filter(|(_, &c)| c == max)
        .map(|(k, _)| k.clone())
        .collect();
    let shares = counts
        .iter()
        .map(|(k, &c)| (k.clone(), c as f64 / n_articles as f64))
        .collect();
    Ok(ResearcherProfile {
        researcher_id: researcher_id.to_string(),
        n_articles,
        counts,
        shares,
        top_cells,
        mean_citations: citations as f64 / n_articles as f64,
    })
}

/// Cosine similarity of the two share vectors over the union of cells.
pub fn profile_overlap(a: &ResearcherProfile, b: &ResearcherProfile) -> Result<f64> {
    for p in [a, b] {
        if p.n_articles == 0 || p.shares.is_empty() {
            return Err(Error::EmptyProfile(p.researcher_id.clone()));
        }
    }
    let dot: f64 = a
        .shares
        .iter()
        .map(|(cell, &s)| s * b.share(cell))
        .sum();
    let norm = |p: &ResearcherProfile| libm::sqrt(p.shares.values().map(|s| s * s).sum::<f64>());
    Ok((dot / (norm(a) * norm(b))).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CategoryRegistry, PublicationRecord};
    use crate::partition::build_partition;
    use alloc::format;
    use alloc::vec::Vec;

    fn corpus(rows: &[(&str, &[&str], &str, u32)]) -> Corpus {
        let mut c = Corpus::new(CategoryRegistry::new());
        for (i, (author, cats, _, cites)) in rows.iter().enumerate() {
            c.insert_registering(
                PublicationRecord::new(format!("p{i:03}"), 2003, "article")
                    .with_categories(cats.iter().copied())
                    .with_citations([(2004, *cites)])
                    .with_authors([*author]),
            )
            .unwrap();
        }
        c
    }

    fn profile(c: &Corpus, id: &str) -> Result<ResearcherProfile> {
        let period = YearRange::new(2000, 2007).unwrap();
        let p = build_partition(c, "article", period);
        researcher_profile(c, &p, id, period, CitationWindow::new(5).unwrap())
    }

    #[test]
    fn single_cell_profile() {
        let rows: Vec<_> = (0..11).map(|_| ("m1", &["M"][..], "", 6u32)).collect();
        let p = profile(&corpus(&rows), "m1").unwrap();
        assert_eq!(p.n_articles, 11);
        assert_eq!(p.share(&"M".parse().unwrap()), 1.0);
        assert_eq!(p.top_cells.len(), 1);
        assert_eq!(p.mean_citations, 6.0);
    }

    #[test]
    fn ties_keep_all_top_cells() {
        let rows = [
            ("r", &["M"][..], "", 1),
            ("r", &["MA"][..], "", 1),
            ("r", &["M", "MA"][..], "", 1),
            ("r", &["M", "MA"][..], "", 1),
            ("r", &["M"][..], "", 1),
        ];
        let p = profile(&corpus(&rows), "r").unwrap();
        let top: Vec<_> = p.top_cells.iter().map(|k| format!("{k}")).collect();
        assert_eq!(top, ["M", "M;MA"]);
        assert!((p.shares.values().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_researcher_is_empty() {
        let rows = [("r", &["M"][..], "", 1)];
        assert_eq!(
            profile(&corpus(&rows), "nobody"),
            Err(Error::EmptyProfile("nobody".into()))
        );
    }

    #[test]
    fn overlap() {
        let rows = [
            ("a", &["M"][..], "", 1),
            ("b", &["M"][..], "", 1),
            ("b", &["MA"][..], "", 1),
            ("c", &["AA"][..], "", 1),
        ];
        let c = corpus(&rows);
        let (a, b, cc) = (profile(&c, "a").unwrap(), profile(&c, "b").unwrap(), profile(&c, "c").unwrap());
        assert!((profile_overlap(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!((profile_overlap(&a, &b).unwrap() - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(profile_overlap(&a, &cc).unwrap(), 0.0);
    }
}
