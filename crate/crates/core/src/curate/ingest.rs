// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::{io_err, CurateError, Split};

/// One input document. `file` is relative to the ingest root, with `/`
/// separators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub file: String,
    #[serde(default)]
    pub caption: Option<String>,
    #[serde(default)]
    pub clip_score: Option<f64>,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub split: Option<Split>,
}

impl ManifestRecord {
    pub fn bare(id: &str, file: &str) -> Self {
        ManifestRecord {
            id: id.to_string(),
            file: file.to_string(),
            caption: None,
            clip_score: None,
            source: None,
            split: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ingested {
    pub records: Vec<ManifestRecord>,
    /// Manifest rows whose file was not found under the root.
    pub unmatched: Vec<ManifestRecord>,
}

fn read_rows(manifest: &Path) -> Result<Vec<ManifestRecord>, CurateError> {
    let text = std::fs::read_to_string(manifest).map_err(io_err(manifest))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CurateError::Manifest { line: i + 1, message: e.to_string() })
        })
        .collect()
}

/// Every `*.svg` under `root` in path order, joined with manifest rows by
/// relative path. Files without a row get their path minus `.svg` as id.
pub fn ingest(root: &Path, manifest: Option<&Path>) -> Result<Ingested, CurateError> {
    let rows = match manifest {
        Some(m) => read_rows(m)?,
        None => Vec::new(),
    };
    let mut ids = HashSet::new();
    for r in &rows {
        if !ids.insert(r.id.clone()) {
            return Err(CurateError::DuplicateId(r.id.clone()));
        }
    }
    let mut by_file: HashMap<String, ManifestRecord> =
        rows.iter().map(|r| (r.file.trim_start_matches("./").to_string(), r.clone())).collect();

    let mut records = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            CurateError::Io { path, source: e.into() }
        })?;
        let is_svg = entry.path().extension().is_some_and(|x| x.eq_ignore_ascii_case("svg"));
        if !entry.file_type().is_file() || !is_svg {
            continue;
        }
        let rel = entry.path().strip_prefix(root).expect("walk stays under root");
        let rel = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        let record = match by_file.remove(&rel) {
            Some(r) => ManifestRecord { file: rel, ..r },
            None => {
                let id = rel[..rel.len() - 4].to_string();
                if !ids.insert(id.clone()) {
                    return Err(CurateError::DuplicateId(id));
                }
                ManifestRecord::bare(&id, &rel)
            }
        };
        records.push(record);
    }
    let matched: HashSet<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let unmatched = rows.iter().filter(|r| !matched.contains(r.id.as_str())).cloned().collect();
    Ok(Ingested { records, unmatched })
}
