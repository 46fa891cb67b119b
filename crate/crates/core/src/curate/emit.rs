// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{io_err, CurateError, DropReason, Dropped, Item, ManifestRecord, Split};
use crate::atomize::atomize_str;
use crate::metrics::command_histogram;
use crate::raster::encode_ppm;
use crate::token::io::write_binary;

/// One line of the emitted `manifest.jsonl`. Field order is the schema
/// order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmittedRecord {
    pub id: String,
    /// Simplified SVG, relative to the output directory.
    pub file: String,
    pub split: Split,
    pub caption: Option<String>,
    pub clip_score: Option<f64>,
    pub source: Option<String>,
    pub n_tokens: usize,
    pub n_paths: usize,
    /// SHA-256 of the source file bytes.
    pub sha256: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub ingested: usize,
    pub emitted: usize,
    pub splits: BTreeMap<String, usize>,
    pub token_length_mean: f64,
    pub token_length_median: f64,
    pub command_histogram: BTreeMap<String, usize>,
    pub dropped: BTreeMap<String, usize>,
    pub unmatched_manifest_rows: Vec<String>,
}

impl StatsReport {
    pub fn dropped_total(&self) -> usize {
        self.dropped.values().sum()
    }

    /// `ingested = emitted + dropped` for pipeline runs.
    pub fn reconciles(&self) -> bool {
        self.ingested == self.emitted + self.dropped_total()
    }

    /// Two aligned columns.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> =
            vec![("ingested".into(), self.ingested.to_string()), ("emitted".into(), self.emitted.to_string())];
        for (k, v) in &self.splits {
            rows.push((format!("split {k}"), v.to_string()));
        }
        rows.push(("tokens mean".into(), format!("{:.1}", self.token_length_mean)));
        rows.push(("tokens median".into(), format!("{:.1}", self.token_length_median)));
        for (k, v) in &self.command_histogram {
            rows.push((format!("command {k}"), v.to_string()));
        }
        for (k, v) in &self.dropped {
            rows.push((format!("dropped {k}"), v.to_string()));
        }
        rows.push(("unmatched manifest rows".into(), self.unmatched_manifest_rows.len().to_string()));
        let kw = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let vw = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, v) in rows {
            writeln!(s, "{k:<kw$}  {v:>vw$}").unwrap();
        }
        s
    }
}

fn median(sorted: &[usize]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        n if n % 2 == 1 => sorted[n / 2] as f64,
        n => (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0,
    }
}

fn summarize(records: &[EmittedRecord], histogram: BTreeMap<String, usize>) -> StatsReport {
    let mut splits: BTreeMap<String, usize> = Split::ALL.iter().map(|s| (s.as_str().to_string(), 0)).collect();
    for r in records {
        *splits.get_mut(r.split.as_str()).unwrap() += 1;
    }
    let mut lens: Vec<usize> = records.iter().map(|r| r.n_tokens).collect();
    lens.sort_unstable();
    let mean = if lens.is_empty() { 0.0 } else { lens.iter().sum::<usize>() as f64 / lens.len() as f64 };
    StatsReport {
        ingested: records.len(),
        emitted: records.len(),
        splits,
        token_length_mean: mean,
        token_length_median: median(&lens),
        command_histogram: histogram,
        dropped: DropReason::ALL.iter().map(|r| (r.as_str().to_string(), 0)).collect(),
        unmatched_manifest_rows: Vec::new(),
    }
}

/// Output file stem: id with anything outside `[A-Za-z0-9._-]` replaced,
/// disambiguated by a hash suffix on collision.
fn stems(items: &[Item]) -> Vec<String> {
    let mut used = HashSet::new();
    items
        .iter()
        .map(|it| {
            let id = &it.record.id;
            let mut s: String =
                id.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect();
            if s.is_empty() || s.starts_with('.') {
                s.insert(0, '_');
            }
            if !used.insert(s.clone()) {
                s = format!("{s}-{}", &hex::encode(Sha256::digest(id.as_bytes()))[..12]);
                used.insert(s.clone());
            }
            s
        })
        .collect()
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CurateError> {
    fs::write(path, bytes).map_err(io_err(path))
}

/// Writes `svg/`, `tokens/` (binary token files), `raster/` (PPM),
/// `manifest.jsonl`, `dropped.jsonl`, `stats.json` and `stats.txt`.
/// Every item must have a split.
pub fn emit(
    items: &[Item],
    dropped: &[Dropped],
    ingested: usize,
    unmatched: &[ManifestRecord],
    out: &Path,
) -> Result<StatsReport, CurateError> {
    for sub in ["svg", "tokens", "raster"] {
        let d = out.join(sub);
        fs::create_dir_all(&d).map_err(io_err(&d))?;
    }
    let mut manifest = String::new();
    let mut records = Vec::with_capacity(items.len());
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for (it, stem) in items.iter().zip(stems(items)) {
        let file = format!("svg/{stem}.svg");
        write(&out.join(&file), it.svg.to_svg_string().as_bytes())?;
        let mut tok = Vec::new();
        write_binary(&it.tokens, &mut tok).expect("writing to memory");
        write(&out.join(format!("tokens/{stem}.svgt")), &tok)?;
        write(&out.join(format!("raster/{stem}.ppm")), &encode_ppm(&it.raster))?;
        for (c, n) in command_histogram(&it.svg) {
            *histogram.entry(c.to_string()).or_insert(0) += n;
        }
        let r = &it.record;
        let rec = EmittedRecord {
            id: r.id.clone(),
            file,
            split: r.split.expect("splits assigned before emit"),
            caption: r.caption.clone(),
            clip_score: r.clip_score,
            source: r.source.clone(),
            n_tokens: crate::metrics::token_length(&it.tokens),
            n_paths: it.svg.paths.len(),
            sha256: it.source_sha256.clone(),
        };
        manifest.push_str(&serde_json::to_string(&rec).expect("plain data"));
        manifest.push('\n');
        records.push(rec);
    }
    write(&out.join("manifest.jsonl"), manifest.as_bytes())?;

    let mut dropped_lines = String::new();
    for d in dropped {
        let v = serde_json::json!({"id": d.id, "reason": d.reason.as_str(), "detail": d.detail});
        dropped_lines.push_str(&v.to_string());
        dropped_lines.push('\n');
    }
    write(&out.join("dropped.jsonl"), dropped_lines.as_bytes())?;

    let mut stats = summarize(&records, histogram);
    stats.ingested = ingested;
    for d in dropped {
        *stats.dropped.get_mut(d.reason.as_str()).unwrap() += 1;
    }
    stats.unmatched_manifest_rows = unmatched.iter().map(|r| r.id.clone()).collect();
    let json = serde_json::to_string_pretty(&stats).expect("plain data") + "\n";
    write(&out.join("stats.json"), json.as_bytes())?;
    write(&out.join("stats.txt"), stats.to_table().as_bytes())?;
    Ok(stats)
}

pub fn read_manifest(path: &Path) -> Result<Vec<EmittedRecord>, CurateError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CurateError::Manifest { line: i + 1, message: e.to_string() })
        })
        .collect()
}

/// Statistics of an emitted manifest. Command counts come from the SVG
/// files next to it; drop counts are not recoverable and stay zero.
pub fn stats_from_manifest(path: &Path) -> Result<StatsReport, CurateError> {
    let records = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut histogram = BTreeMap::new();
    for r in &records {
        let f = base.join(&r.file);
        let Ok(text) = fs::read_to_string(&f) else { continue };
        if let Ok(svg) = atomize_str(&text) {
            for (c, n) in command_histogram(&svg) {
                *histogram.entry(c.to_string()).or_insert(0) += n;
            }
        }
    }
    Ok(summarize(&records, histogram))
}
