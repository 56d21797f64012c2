//! Subject categories and canonical cell keys.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Separator between codes in the textual form of a [`CellKey`].
pub const KEY_SEPARATOR: char = ';';

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubjectCategory {
    pub code: String,
    pub name: String,
}

impl SubjectCategory {
    pub fn new(code: impl Into<String>, name: impl Into<String>) -> Result<Self> {
        let code = code.into();
        validate_code(&code)?;
        Ok(Self {
            code,
            name: name.into(),
        })
    }
}

pub fn validate_code(code: &str) -> Result<()> {
    if code.is_empty() || code.contains(KEY_SEPARATOR) || code.chars().any(char::is_whitespace) {
        return Err(Error::InvalidCategoryCode(code.to_string()));
    }
    Ok(())
}

/// An exact combination of subject categories.
///
/// Codes are kept strictly ascending, so two publications share a key iff
/// their journals carry exactly the same category set. Keys order by their
/// code lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey(Vec<String>);

impl CellKey {
    pub fn codes(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: keys are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, code: &str) -> bool {
        self.0.binary_search_by(|c| c.as_str().cmp(code)).is_ok()
    }

    pub fn shares_category_with(&self, other: &CellKey) -> bool {
        self.0.iter().any(|c| other.contains(c))
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, code) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            f.write_str(code)?;
        }
        Ok(())
    }
}

impl FromStr for CellKey {
    type Err = Error;

    /// Parses `;`-joined codes; the result is canonicalized.
    fn from_str(s: &str) -> Result<Self> {
        canonical_cell_key(s.split(KEY_SEPARATOR))
    }
}

/// Sorted, de-duplicated key for a set of category codes.
pub fn canonical_cell_key<I, S>(categories: I) -> Result<CellKey>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut codes = BTreeSet::new();
    for code in categories {
        let code = code.as_ref();
        validate_code(code)?;
        codes.insert(code.to_string());
    }
    if codes.is_empty() {
        return Err(Error::EmptyCategorySet);
    }
    Ok(CellKey(codes.into_iter().collect()))
}

/// Cells for category `i` alone, `i` and `j` combined, and `j` alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdjacentTriple {
    pub left: CellKey,
    pub middle: CellKey,
    pub right: CellKey,
}

impl AdjacentTriple {
    /// The two compared pairs: left with middle, middle with right.
    pub fn pairs(&self) -> [(&CellKey, &CellKey); 2] {
        [(&self.left, &self.middle), (&self.middle, &self.right)]
    }
}

/// Builds the triple for categories `i` and `j`. The keys need not be
/// populated in any partition.
pub fn adjacent_triples(i: &str, j: &str) -> Result<AdjacentTriple> {
    validate_code(i)?;
    validate_code(j)?;
    if i == j {
        return Err(Error::DegenerateTriple(i.to_string()));
    }
    Ok(AdjacentTriple {
        left: canonical_cell_key([i])?,
        middle: canonical_cell_key([i, j])?,
        right: canonical_cell_key([j])?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn canonical_key_sorts_and_dedups() {
        assert_eq!(format!("{}", canonical_cell_key(["MA", "M"]).unwrap()), "M;MA");
        assert_eq!(format!("{}", canonical_cell_key(["M"]).unwrap()), "M");
        assert_eq!(
            format!("{}", canonical_cell_key(["PPF", "AA", "PPF"]).unwrap()),
            "AA;PPF"
        );
    }

    #[test]
    fn canonical_key_is_idempotent() {
        let key = canonical_cell_key(["PMd", "AA", "PPF"]).unwrap();
        assert_eq!(canonical_cell_key(key.codes()).unwrap(), key);
        assert_eq!("PPF;AA;PMd".parse::<CellKey>().unwrap(), key);
    }

    #[test]
    fn rejects_empty_and_invalid_codes() {
        let empty: [&str; 0] = [];
        assert_eq!(canonical_cell_key(empty), Err(Error::EmptyCategorySet));
        assert!(matches!(
            canonical_cell_key(["M A"]),
            Err(Error::InvalidCategoryCode(_))
        ));
        assert!(matches!(
            canonical_cell_key([""]),
            Err(Error::InvalidCategoryCode(_))
        ));
        assert!(matches!(
            SubjectCategory::new("M;MA", "x"),
            Err(Error::InvalidCategoryCode(_))
        ));
    }

    #[test]
    fn triples() {
        let t = adjacent_triples("M", "MA").unwrap();
        assert_eq!(
            [t.left.to_string(), t.middle.to_string(), t.right.to_string()],
            ["M", "M;MA", "MA"]
        );
        let t = adjacent_triples("AA", "PPF").unwrap();
        assert_eq!(t.middle.to_string(), "AA;PPF");
        // argument order does not change the middle key
        assert_eq!(adjacent_triples("PPF", "AA").unwrap().middle, t.middle);
        assert_eq!(
            adjacent_triples("M", "M"),
            Err(Error::DegenerateTriple("M".into()))
        );
    }

    #[test]
    fn contains_uses_exact_codes() {
        let key = canonical_cell_key(["AA", "PPF"]).unwrap();
        assert!(key.contains("AA"));
        assert!(!key.contains("A"));
        assert!(key.shares_category_with(&canonical_cell_key(["PPF"]).unwrap()));
        assert!(!key.shares_category_with(&canonical_cell_key(["M"]).unwrap()));
    }
}
