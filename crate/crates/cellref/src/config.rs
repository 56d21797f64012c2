//! `key = value` run configuration files.
//!
//! Keys are the long flag names without dashes (`years`, `css-k`, ...).
//! Blank lines and lines starting with `#` are ignored. Values given on the
//! command line take precedence over the file.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::AppError;

pub const CONFIG_KEYS: [&str; 17] = [
    "pubs",
    "cats",
    "ref-table",
    "out-dir",
    "format",
    "doc-type",
    "years",
    "windows",
    "css-k",
    "strict",
    "triples",
    "year-pairs",
    "window-pairs",
    "researchers",
    "window",
    "spec",
    "seed",
];

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, AppError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| AppError::usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").to_string();
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(AppError::usage(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        let value = value.trim().trim_matches('"').to_string();
        if out.insert(key.clone(), value).is_some() {
            return Err(AppError::usage(format!("config line {}: {key:?} given twice", i + 1)));
        }
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_config(&text)
}
