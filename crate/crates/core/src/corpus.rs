//! Publication records, the category registry and the corpus container.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};

use crate::category::{canonical_cell_key, validate_code, CellKey, SubjectCategory};
use crate::error::{Error, Result};

/// Inclusive range of publication years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YearRange {
    start: i32,
    end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::EmptyYearRange { start, end });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start..=self.end
    }
}

/// Lowercased, trimmed document type token.
pub fn normalize_doc_type(doc_type: &str) -> String {
    doc_type.trim().to_lowercase()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub year: i32,
    pub doc_type: String,
    pub categories: BTreeSet<String>,
    /// Calendar year to citations received that year; absent years are zero.
    pub citations_by_year: BTreeMap<i32, u32>,
    pub author_ids: BTreeSet<String>,
}

impl PublicationRecord {
    pub fn new(pub_id: impl Into<String>, year: i32, doc_type: &str) -> Self {
        Self {
            pub_id: pub_id.into(),
            year,
            doc_type: normalize_doc_type(doc_type),
            categories: BTreeSet::new(),
            citations_by_year: BTreeMap::new(),
            author_ids: BTreeSet::new(),
        }
    }

    pub fn with_categories<I, S>(mut self, codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.categories.extend(codes.into_iter().map(Into::into));
        self
    }

    pub fn with_citations(mut self, citations: impl IntoIterator<Item = (i32, u32)>) -> Self {
        for (year, count) in citations {
            *self.citations_by_year.entry(year).or_default() += count;
        }
        self
    }

    pub fn with_authors<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.author_ids.extend(ids.into_iter().map(Into::into));
        self
    }

    /// Checks the record-level invariants: a non-empty set of valid codes and
    /// no citations dated before the publication year.
    pub fn validate(&self) -> Result<()> {
        if self.categories.is_empty() {
            return Err(Error::EmptyCategorySet);
        }
        for code in &self.categories {
            validate_code(code)?;
        }
        if let Some((&first, _)) = self.citations_by_year.first_key_value() {
            if first < self.year {
                return Err(Error::TemporalViolation(self.pub_id.clone()));
            }
        }
        Ok(())
    }

    pub fn cell_key(&self) -> Result<CellKey> {
        canonical_cell_key(&self.categories)
    }
}

/// Code to name mapping; both directions are unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryRegistry {
    by_code: BTreeMap<String, String>,
    by_name: BTreeMap<String, String>,
}

impl CategoryRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, category: SubjectCategory) -> Result<()> {
        validate_code(&category.code)?;
        if self.by_code.contains_key(&category.code) {
            return Err(Error::DuplicateCategory(category.code));
        }
        if let Some(first) = self.by_name.get(&category.name) {
            return Err(Error::NonInjectiveRegistry {
                name: category.name,
                first: first.clone(),
                second: category.code,
            });
        }
        self.by_name
            .insert(category.name.clone(), category.code.clone());
        self.by_code.insert(category.code, category.name);
        Ok(())
    }

    /// Registers `code` with its own code as name, unless already present.
    pub fn ensure(&mut self, code: &str) -> Result<()> {
        if self.contains(code) {
            return Ok(());
        }
        self.insert(SubjectCategory::new(code, code)?)
    }

    pub fn contains(&self, code: &str) -> bool {
        self.by_code.contains_key(code)
    }

    pub fn name(&self, code: &str) -> Option<&str> {
        self.by_code.get(code).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.by_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_code.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = SubjectCategory> + '_ {
        self.by_code.iter().map(|(code, name)| SubjectCategory {
            code: code.clone(),
            name: name.clone(),
        })
    }
}

/// Publications keyed by id together with the categories they may use.
///
/// Every record held by a corpus has passed [`PublicationRecord::validate`]
/// and only uses registered codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    publications: BTreeMap<String, PublicationRecord>,
    registry: CategoryRegistry,
}

impl Corpus {
    pub fn new(registry: CategoryRegistry) -> Self {
        Self {
            publications: BTreeMap::new(),
            registry,
        }
    }

    pub fn insert(&mut self, record: PublicationRecord) -> Result<()> {
        record.validate()?;
        if let Some(code) = record.categories.iter().find(|c| !self.registry.contains(c)) {
            return Err(Error::UnknownCategory(code.clone()));
        }
        self.insert_checked(record)
    }

    /// Like [`Corpus::insert`] but registers unknown codes under their own
    /// code as name.
    pub fn insert_registering(&mut self, record: PublicationRecord) -> Result<()> {
        record.validate()?;
        if self.publications.contains_key(&record.pub_id) {
            return Err(Error::DuplicateId(record.pub_id));
        }
        for code in &record.categories {
            self.registry.ensure(code)?;
        }
        self.insert_checked(record)
    }

    fn insert_checked(&mut self, record: PublicationRecord) -> Result<()> {
        match self.publications.entry(record.pub_id.clone()) {
            btree_map::Entry::Occupied(_) => Err(Error::DuplicateId(record.pub_id)),
            btree_map::Entry::Vacant(slot) => {
                slot.insert(record);
                Ok(())
            }
        }
    }

    pub fn get(&self, pub_id: &str) -> Option<&PublicationRecord> {
        self.publications.get(pub_id)
    }

    /// Records in ascending `pub_id` order.
    pub fn iter(&self) -> impl Iterator<Item = &PublicationRecord> {
        self.publications.values()
    }

    pub fn len(&self) -> usize {
        self.publications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.publications.is_empty()
    }

    pub fn registry(&self) -> &CategoryRegistry {
        &self.registry
    }

    /// All researcher ids occurring in any record, sorted.
    pub fn researcher_ids(&self) -> BTreeSet<String> {
        self.iter()
            .flat_map(|p| p.author_ids.iter().cloned())
            .collect()
    }

    pub fn has_researcher(&self, id: &str) -> bool {
        self.iter().any(|p| p.author_ids.contains(id))
    }

    pub fn category_codes(&self) -> BTreeSet<String> {
        self.iter()
            .flat_map(|p| p.categories.iter().map(ToString::to_string))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn registry(codes: &[&str]) -> CategoryRegistry {
        let mut r = CategoryRegistry::new();
        for c in codes {
            r.ensure(c).unwrap();
        }
        r
    }

    #[test]
    fn year_range() {
        let r = YearRange::new(2000, 2007).unwrap();
        assert!(r.contains(2000) && r.contains(2007) && !r.contains(2008));
        assert_eq!(r.years().count(), 8);
        assert_eq!(
            YearRange::new(2007, 2005),
            Err(Error::EmptyYearRange {
                start: 2007,
                end: 2005
            })
        );
    }

    #[test]
    fn temporal_violation() {
        let rec = PublicationRecord::new("p1", 2005, "article")
            .with_categories(["M"])
            .with_citations([(2003, 1)]);
        assert_eq!(rec.validate(), Err(Error::TemporalViolation("p1".into())));
    }

    #[test]
    fn rejects_duplicates_unknown_and_empty() {
        let mut corpus = Corpus::new(registry(&["M", "MA"]));
        let rec = PublicationRecord::new("p1", 2005, "Article ").with_categories(["M", "MA"]);
        assert_eq!(rec.doc_type, "article");
        corpus.insert(rec.clone()).unwrap();
        assert_eq!(corpus.insert(rec), Err(Error::DuplicateId("p1".into())));
        let unknown = PublicationRecord::new("p2", 2005, "article").with_categories(["AA"]);
        assert_eq!(
            corpus.insert(unknown.clone()),
            Err(Error::UnknownCategory("AA".into()))
        );
        corpus.insert_registering(unknown).unwrap();
        assert!(corpus.registry().contains("AA"));
        let empty = PublicationRecord::new("p3", 2005, "article");
        assert_eq!(corpus.insert(empty), Err(Error::EmptyCategorySet));
        assert_eq!(corpus.len(), 2);
    }

    #[test]
    fn registry_is_injective() {
        let mut r = CategoryRegistry::new();
        r.insert(SubjectCategory::new("MA", "Mathematics, Applied").unwrap())
            .unwrap();
        assert_eq!(
            r.insert(SubjectCategory::new("MA", "Other").unwrap()),
            Err(Error::DuplicateCategory("MA".into()))
        );
        assert!(matches!(
            r.insert(SubjectCategory::new("MAP", "Mathematics, Applied").unwrap()),
            Err(Error::NonInjectiveRegistry { .. })
        ));
    }
}
