//! Partition-cell citation reference values.
//!
//! A publication corpus is partitioned into cells, one per exact combination
//! of subject categories. Per cell, publication year and citation window the
//! crate computes the mean expected citation rate `e` and the outstanding
//! threshold `T` obtained by Characteristic Scores and Scales (iterated
//! truncated means). On top of those reference values it provides
//! normalized scores, highly-cited flags, pairwise relative differences
//! across years, windows and adjacent cells, and researcher cell profiles.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the synthetic
//! corpus generator, reports and the command line live in the `cellref`
//! companion crate.

#![no_std]

extern crate alloc;

pub mod calibrate;
pub mod category;
pub mod compare;
pub mod corpus;
mod error;
pub mod metrics;
pub mod partition;
pub mod profile;

pub use category::{adjacent_triples, canonical_cell_key, AdjacentTriple, CellKey, SubjectCategory};
pub use compare::{
    relative_difference, summarize_dimension, Comparison, DifferenceRecord, Dimension,
    DimensionSummary, Metric, RefContext, SkipReason, SkippedComparison,
};
pub use corpus::{CategoryRegistry, Corpus, PublicationRecord, YearRange};
pub use error::{Error, Result};
pub use metrics::{
    build_reference_table, citation_count, css_scores, mean_expected_citations,
    outstanding_threshold, Aggregation, CitationWindow, CssScores, NormalizedScore,
    ReferenceTable, ReferenceValues, DEFAULT_CSS_K,
};
pub use partition::{build_partition, CellPartition};
pub use profile::{profile_overlap, researcher_profile, ResearcherProfile};
