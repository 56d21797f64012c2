//! Files, synthetic corpora, reports and the `cellref` command line on top
//! of [`cellref_core`].

pub mod app;
pub mod config;
pub mod error;
pub mod generate;
pub mod ingest;
pub mod report;

pub use error::AppError;
