// SPDX-License-Identifier: Apache-2.0

//! Batch dataset curation: ingest, simplify, dedup, filter, split, emit.

mod emit;
mod ingest;
mod split;

pub use emit::{emit, read_manifest, stats_from_manifest, EmittedRecord, StatsReport};
pub use ingest::{ingest, Ingested, ManifestRecord};
pub use split::{assign_splits, split_for, Split};

use std::collections::HashSet;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::atomize::{atomize, AtomicSvg, AtomizeError};
use crate::metrics::{dhash, hamming};
use crate::raster::{rasterize, Raster, RenderOptions};
use crate::scene::parse_svg;
use crate::token::{encode, TokenSeq};

#[derive(Debug, Error)]
pub enum CurateError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("invalid config: {0}")]
    Config(String),
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CurateError + '_ {
    move |source| CurateError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DropReason {
    Duplicate,
    Blank,
    Clip,
    ParseError,
    EmptyGeometry,
}

impl DropReason {
    pub const ALL: [DropReason; 5] =
        [DropReason::Duplicate, DropReason::Blank, DropReason::Clip, DropReason::ParseError, DropReason::EmptyGeometry];

    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Duplicate => "duplicate",
            DropReason::Blank => "blank",
            DropReason::Clip => "clip",
            DropReason::ParseError => "parse-error",
            DropReason::EmptyGeometry => "empty-geometry",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dropped {
    pub id: String,
    pub reason: DropReason,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurationConfig {
    pub clip_min: f64,
    /// Raster near-duplicate threshold; negative disables the raster pass.
    pub dedup_hamming: i32,
    pub split_ratios: [f64; 3],
    pub seed: u64,
    pub raster_size: usize,
}

impl Default for CurationConfig {
    fn default() -> Self {
        CurationConfig { clip_min: 30.0, dedup_hamming: 0, split_ratios: [0.90, 0.05, 0.05], seed: 0, raster_size: 200 }
    }
}

impl CurationConfig {
    pub fn validate(&self) -> Result<(), CurateError> {
        let r = self.split_ratios;
        if r.iter().any(|&v| !(0.0..=1.0).contains(&v)) || (r.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CurateError::Config(format!("split ratios {r:?} must be in [0,1] and sum to 1")));
        }
        if self.raster_size == 0 {
            return Err(CurateError::Config("raster size must be at least 1".into()));
        }
        Ok(())
    }
}

/// A record that made it through atomization, with everything later
/// stages need.
#[derive(Clone, Debug)]
pub struct Item {
    pub record: ManifestRecord,
    pub source_sha256: String,
    pub svg: AtomicSvg,
    pub tokens: TokenSeq,
    pub raster: Raster,
}

impl Item {
    pub fn token_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for id in &self.tokens.ids {
            h.update(id.to_le_bytes());
        }
        if let Some(rules) = &self.tokens.fill_rules {
            h.update(rules.iter().map(|r| *r as u8).collect::<Vec<_>>());
        }
        h.finalize().into()
    }
}

/// Reads, atomizes, tokenizes and renders each record in parallel. Output
/// keeps input order.
pub fn prepare(
    records: Vec<ManifestRecord>,
    root: &Path,
    cfg: &CurationConfig,
) -> Result<(Vec<Item>, Vec<Dropped>), CurateError> {
    let opts = RenderOptions { size: cfg.raster_size, ..Default::default() };
    let results: Vec<Result<Result<Item, Dropped>, CurateError>> = records
        .into_par_iter()
        .map(|record| {
            let path = root.join(&record.file);
            let bytes = std::fs::read(&path).map_err(io_err(&path))?;
            Ok(prepare_one(record, &bytes, &opts))
        })
        .collect();
    let mut items = Vec::new();
    let mut dropped = Vec::new();
    for r in results {
        match r? {
            Ok(item) => items.push(item),
            Err(d) => dropped.push(d),
        }
    }
    Ok((items, dropped))
}

fn prepare_one(record: ManifestRecord, bytes: &[u8], opts: &RenderOptions) -> Result<Item, Dropped> {
    let drop = |reason, detail: String| Dropped { id: record.id.clone(), reason, detail };
    let text = std::str::from_utf8(bytes).map_err(|e| drop(DropReason::ParseError, e.to_string()))?;
    let svg = parse_svg(text).map_err(AtomizeError::from).and_then(|tree| atomize(&tree)).map_err(|e| match e {
        AtomizeError::EmptyGeometry => drop(DropReason::EmptyGeometry, e.to_string()),
        other => drop(DropReason::ParseError, other.to_string()),
    })?;
    let tokens = encode(&svg).map_err(|e| drop(DropReason::ParseError, e.to_string()))?;
    let raster = rasterize(&svg, opts);
    Ok(Item { source_sha256: hex::encode(Sha256::digest(bytes)), record, svg, tokens, raster })
}

/// Three passes, cheapest first: source bytes, token sequence, raster
/// dHash within `max_hamming` (skipped when negative). The first
/// occurrence wins.
pub fn dedup(items: Vec<Item>, max_hamming: i32) -> (Vec<Item>, Vec<Dropped>) {
    let mut dropped = Vec::new();
    let mut bytes_seen = HashSet::new();
    let mut tokens_seen = HashSet::new();
    let mut hashes: Vec<u64> = Vec::new();
    let mut kept = Vec::new();
    for item in items {
        let dup = |what: &str| Dropped {
            id: item.record.id.clone(),
            reason: DropReason::Duplicate,
            detail: what.to_string(),
        };
        if !bytes_seen.insert(item.source_sha256.clone()) {
            dropped.push(dup("identical file bytes"));
            continue;
        }
        if !tokens_seen.insert(item.token_hash()) {
            dropped.push(dup("identical token sequence"));
            continue;
        }
        if max_hamming >= 0 {
            let h = dhash(&item.raster);
            if hashes.iter().any(|&k| hamming(h, k) as i32 <= max_hamming) {
                dropped.push(dup("raster near-duplicate"));
                continue;
            }
            hashes.push(h);
        }
        kept.push(item);
    }
    (kept, dropped)
}

/// Drops renders that are opaque white everywhere.
pub fn filter_blank(items: Vec<Item>) -> (Vec<Item>, Vec<Dropped>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for item in items {
        if item.raster.pixels.iter().all(|&v| v == 255) {
            dropped.push(Dropped {
                id: item.record.id.clone(),
                reason: DropReason::Blank,
                detail: "render is completely white".into(),
            });
        } else {
            kept.push(item);
        }
    }
    (kept, dropped)
}

/// Drops items whose clip score is present and below `clip_min`.
pub fn filter_clip(items: Vec<Item>, clip_min: f64) -> (Vec<Item>, Vec<Dropped>) {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for item in items {
        match item.record.clip_score {
            Some(s) if s < clip_min => dropped.push(Dropped {
                id: item.record.id.clone(),
                reason: DropReason::Clip,
                detail: format!("clip score {s} < {clip_min}"),
            }),
            _ => kept.push(item),
        }
    }
    (kept, dropped)
}

/// The whole pipeline from a directory of SVGs to an emitted dataset.
pub fn curate(
    input: &Path,
    manifest: Option<&Path>,
    out: &Path,
    cfg: &CurationConfig,
) -> Result<StatsReport, CurateError> {
    cfg.validate()?;
    let ingested = ingest(input, manifest)?;
    let total = ingested.records.len();
    let (items, mut dropped) = prepare(ingested.records, input, cfg)?;
    let (items, d) = dedup(items, cfg.dedup_hamming);
    dropped.extend(d);
    let (items, d) = filter_blank(items);
    dropped.extend(d);
    let (mut items, d) = filter_clip(items, cfg.clip_min);
    dropped.extend(d);
    assign_splits(&mut items, cfg.split_ratios, cfg.seed);
    emit(&items, &dropped, total, &ingested.unmatched, out)
}
