// SPDX-License-Identifier: Apache-2.0

//! Reference/candidate evaluation with pixel metrics.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomize::{atomize_str, AtomicSvg, AtomizeError};
use crate::metrics::{command_histogram, mse, ssim, token_length, MetricError, MetricReport};
use crate::raster::{rasterize, read_ppm, write_ppm, Raster, RasterError, RenderOptions};
use crate::token::io::read_token_file;
use crate::token::{decode, encode, TokenError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: AtomizeError },
    #[error("{path}: {source}")]
    Raster { path: PathBuf, source: RasterError },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Token(#[from] TokenError),
    #[error("pairs file line {line}: {message}")]
    Pairs { line: usize, message: String },
    #[error("no reports to aggregate")]
    EmptyInput,
}

/// `reference` is an SVG or a PPM; `candidate` is an SVG or a token file
/// (`.svgt`/`.tok`), which is decoded without re-atomizing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalPair {
    pub id: String,
    pub reference: PathBuf,
    pub candidate: PathBuf,
}

/// A metric report plus processing time in milliseconds. This is toolkit
/// time, not model generation time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    #[serde(flatten)]
    pub report: MetricReport,
    pub wall_ms: f64,
}

fn load_svg(path: &Path) -> Result<AtomicSvg, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.into(), source })?;
    atomize_str(&text).map_err(|source| BenchError::Parse { path: path.into(), source })
}

fn has_ext(path: &Path, exts: &[&str]) -> bool {
    path.extension().is_some_and(|e| exts.iter().any(|x| e.eq_ignore_ascii_case(x)))
}

fn load_candidate(path: &Path) -> Result<AtomicSvg, BenchError> {
    if !has_ext(path, &["svgt", "tok"]) {
        return load_svg(path);
    }
    let seq = read_token_file(path).map_err(|source| BenchError::Io { path: path.into(), source })?;
    Ok(decode(&seq)?)
}

/// Renders both sides and compares them. With `export`, writes
/// `<id>.ref.ppm` and `<id>.cand.ppm` there for external metrics.
pub fn evaluate_pair(pair: &EvalPair, opts: &RenderOptions, export: Option<&Path>) -> Result<EvalRecord, BenchError> {
    let start = Instant::now();
    let cand = load_candidate(&pair.candidate)?;
    let cand_raster = rasterize(&cand, opts);
    let ref_raster: Raster = if has_ext(&pair.reference, &["ppm"]) {
        read_ppm(&pair.reference).map_err(|source| BenchError::Raster { path: pair.reference.clone(), source })?
    } else {
        rasterize(&load_svg(&pair.reference)?, opts)
    };
    let report = MetricReport {
        id: pair.id.clone(),
        mse: mse(&ref_raster, &cand_raster)?,
        ssim: ssim(&ref_raster, &cand_raster)?,
        n_tokens: token_length(&encode(&cand)?),
        n_paths: cand.paths.len(),
        n_commands: cand.command_count(),
        command_histogram: command_histogram(&cand),
    };
    if let Some(dir) = export {
        for (suffix, r) in [("ref", &ref_raster), ("cand", &cand_raster)] {
            let path = dir.join(format!("{}.{suffix}.ppm", pair.id.replace(['/', '\\'], "_")));
            write_ppm(r, &path).map_err(|source| BenchError::Raster { path, source })?;
        }
    }
    Ok(EvalRecord { report, wall_ms: start.elapsed().as_secs_f64() * 1000.0 })
}

/// Evaluates in parallel; results keep input order.
pub fn evaluate_pairs(
    pairs: &[EvalPair],
    opts: &RenderOptions,
    export: Option<&Path>,
) -> Vec<Result<EvalRecord, BenchError>> {
    pairs.par_iter().map(|p| evaluate_pair(p, opts, export)).collect()
}

/// Reads `{"id","reference","candidate"}` lines; relative paths resolve
/// against the pairs file's directory.
pub fn read_pairs(path: &Path) -> Result<Vec<EvalPair>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.into(), source })?;
    let base = path.parent().unwrap_or(Path::new("."));
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let mut p: EvalPair =
                serde_json::from_str(l).map_err(|e| BenchError::Pairs { line: i + 1, message: e.to_string() })?;
            p.reference = base.join(&p.reference);
            p.candidate = base.join(&p.candidate);
            Ok(p)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub median: f64,
    pub stddev: f64,
}

impl Stat {
    /// Values are sorted first, so the result does not depend on order.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Stat {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return Stat::default();
        }
        v.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
        dev.sort_by(f64::total_cmp);
        let median = if v.len() % 2 == 1 { v[v.len() / 2] } else { (v[v.len() / 2 - 1] + v[v.len() / 2]) / 2.0 };
        Stat { mean, median, stddev: (dev.iter().sum::<f64>() / n).sqrt() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mse: Stat,
    pub ssim: Stat,
    pub n_tokens: Stat,
    pub n_paths: Stat,
    pub n_commands: Stat,
    pub wall_ms: Stat,
}

pub fn aggregate(records: &[EvalRecord]) -> Result<Summary, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let col = |f: fn(&EvalRecord) -> f64| Stat::of(records.iter().map(f));
    Ok(Summary {
        count: records.len(),
        mse: col(|r| r.report.mse),
        ssim: col(|r| r.report.ssim),
        n_tokens: col(|r| r.report.n_tokens as f64),
        n_paths: col(|r| r.report.n_paths as f64),
        n_commands: col(|r| r.report.n_commands as f64),
        wall_ms: col(|r| r.wall_ms),
    })
}
