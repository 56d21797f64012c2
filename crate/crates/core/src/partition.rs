//! Exact-combination partition of a corpus.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::category::CellKey;
use crate::corpus::{normalize_doc_type, Corpus, YearRange};

/// Admitted publications grouped by the canonical key of their full
/// category set. Cells are disjoint and together cover every admitted id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellPartition {
    cells: BTreeMap<CellKey, BTreeSet<String>>,
    cell_of: BTreeMap<String, CellKey>,
}

impl CellPartition {
    pub fn cells(&self) -> &BTreeMap<CellKey, BTreeSet<String>> {
        &self.cells
    }

    pub fn get(&self, cell: &CellKey) -> Option<&BTreeSet<String>> {
        self.cells.get(cell)
    }

    pub fn cell_of(&self, pub_id: &str) -> Option<&CellKey> {
        self.cell_of.get(pub_id)
    }

    pub fn is_admitted(&self, pub_id: &str) -> bool {
        self.cell_of.contains_key(pub_id)
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn admitted_count(&self) -> usize {
        self.cell_of.len()
    }

    /// Populated cells sharing at least one category with `cell`, excluding
    /// `cell` itself. This is the generalized adjacency; headline comparisons
    /// use [`crate::AdjacentTriple`] instead.
    pub fn neighbours(&self, cell: &CellKey) -> Vec<&CellKey> {
        self.cells
            .keys()
            .filter(|k| *k != cell && k.shares_category_with(cell))
            .collect()
    }
}

/// Groups the publications of `corpus` with the given document type and a
/// publication year inside `years` by exact category set.
pub fn build_partition(corpus: &Corpus, doc_type: &str, years: YearRange) -> CellPartition {
    let doc_type = normalize_doc_type(doc_type);
    let mut partition = CellPartition::default();
    for record in corpus.iter() {
        if record.doc_type != doc_type || !years.contains(record.year) {
            continue;
        }
        let key = record
            .cell_key()
            .expect("corpus records carry validated categories");
        partition
            .cells
            .entry(key.clone())
            .or_default()
            .insert(record.pub_id.clone());
        partition.cell_of.insert(record.pub_id.clone(), key);
    }
    partition
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CategoryRegistry, PublicationRecord};
    use alloc::string::ToString;
    use alloc::vec;

    fn corpus() -> Corpus {
        let mut c = Corpus::new(CategoryRegistry::new());
        for (id, cats) in [("a", vec!["M"]), ("b", vec!["M"]), ("c", vec!["MA", "M"])] {
            c.insert_registering(PublicationRecord::new(id, 2005, "article").with_categories(cats))
                .unwrap();
        }
        c
    }

    #[test]
    fn groups_by_exact_combination() {
        let p = build_partition(&corpus(), "article", YearRange::new(2000, 2007).unwrap());
        let cells: Vec<_> = p
            .cells()
            .iter()
            .map(|(k, ids)| (k.to_string(), ids.len()))
            .collect();
        assert_eq!(cells, vec![("M".to_string(), 2), ("M;MA".to_string(), 1)]);
        assert_eq!(p.cell_of("c").unwrap().to_string(), "M;MA");
        assert_eq!(p.admitted_count(), 3);
    }

    #[test]
    fn filters_doc_type_and_years() {
        let c = corpus();
        assert!(build_partition(&c, "review", YearRange::new(2000, 2007).unwrap()).is_empty());
        assert!(build_partition(&c, "article", YearRange::new(2006, 2007).unwrap()).is_empty());
        assert_eq!(
            build_partition(&c, " ARTICLE", YearRange::new(2005, 2005).unwrap()).len(),
            2
        );
    }

    #[test]
    fn neighbours_share_a_category() {
        let p = build_partition(&corpus(), "article", YearRange::new(2005, 2005).unwrap());
        let m: CellKey = "M".parse().unwrap();
        let n: Vec<_> = p.neighbours(&m).iter().map(|k| k.to_string()).collect();
        assert_eq!(n, vec!["M;MA"]);
    }
}
