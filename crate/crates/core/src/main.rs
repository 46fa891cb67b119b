// SPDX-License-Identifier: Apache-2.0

//! Command-line front end over the library.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use walkdir::WalkDir;

use atomsvg::atomize::{atomize_str, atomize_with_report, AtomicSvg};
use atomsvg::bench::{aggregate, evaluate_pairs, read_pairs};
use atomsvg::curate::{curate, stats_from_manifest, CurationConfig};
use atomsvg::ngram::{read_model, write_model, NgramModel, SamplerConfig};
use atomsvg::raster::{rasterize, write_ppm, RenderOptions};
use atomsvg::scene::parse_svg;
use atomsvg::token::io::{read_token_file, to_text, write_binary};
use atomsvg::token::{decode, encode, TokenSeq};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "atomsvg", version, about = "Atomic SVG simplification, tokens, rendering and curation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite an SVG into atomic form on the 200x200 grid.
    Simplify {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Encode an SVG as token ids (text unless --binary).
    Tokenize {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long)]
        binary: bool,
    },
    /// Decode a token file (text or binary) back into SVG.
    Detokenize {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
    },
    /// Render an SVG to a binary PPM.
    Render {
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
        size: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        ss: u32,
    },
    /// Build a dataset from a directory of SVGs.
    Curate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 30.0)]
        clip_min: f64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        dedup_hamming: i32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "0.9,0.05,0.05", value_parser = parse_split)]
        split: [f64; 3],
    },
    /// Summarize an emitted manifest.jsonl.
    Stats { manifest: PathBuf },
    /// Fit an n-gram model on token files (*.svgt, *.tok) or, if there are
    /// none, on SVG files under a directory.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        o: PathBuf,
        #[arg(long, default_value_t = 3)]
        order: u8,
    },
    /// Draw grammar-valid samples from a model.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
        top_k: u32,
        #[arg(long, default_value_t = 0.95, value_parser = parse_top_p)]
        top_p: f64,
        #[arg(long, default_value_t = 1.0)]
        temperature: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        max_len: usize,
        #[arg(short)]
        o: PathBuf,
    },
    /// Score candidate SVGs or token files against references. Pairs that
    /// fail to load are reported on stderr and skipped.
    Eval {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(short)]
        o: PathBuf,
        /// Also write both rasters of every pair here.
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(11..))]
        size: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        ss: u32,
    },
}

fn parse_split(s: &str) -> std::result::Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    let arr: [f64; 3] = v.try_into().map_err(|_| "expected three comma-separated ratios".to_string())?;
    if arr.iter().any(|r| !(0.0..=1.0).contains(r)) || (arr.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err("ratios must lie in [0,1] and sum to 1".into());
    }
    Ok(arr)
}

fn parse_top_p(s: &str) -> std::result::Result<f64, String> {
    let p: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if p > 0.0 && p <= 1.0 {
        Ok(p)
    } else {
        Err("top-p must be in (0, 1]".into())
    }
}

fn read_svg(path: &Path) -> Result<AtomicSvg> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(atomize_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

fn write_tokens(t: &TokenSeq, path: &Path, binary: bool) -> Result<()> {
    if binary {
        let mut buf = Vec::new();
        write_binary(t, &mut buf)?;
        fs::write(path, buf)?;
    } else {
        fs::write(path, to_text(t))?;
    }
    Ok(())
}

fn files_with(dir: &Path, exts: &[&str]) -> Vec<PathBuf> {
    WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| p.extension().is_some_and(|x| exts.iter().any(|e| x.eq_ignore_ascii_case(e))))
        .collect()
}

fn training_corpus(dir: &Path) -> Result<Vec<TokenSeq>> {
    let token_files = files_with(dir, &["svgt", "tok"]);
    let mut corpus = Vec::new();
    if !token_files.is_empty() {
        for f in token_files {
            let t = read_token_file(&f).map_err(|e| format!("{}: {e}", f.display()))?;
            decode(&t).map_err(|e| format!("{}: {e}", f.display()))?;
            corpus.push(t);
        }
        return Ok(corpus);
    }
    for f in files_with(dir, &["svg"]) {
        match read_svg(&f).and_then(|s| Ok(encode(&s)?)) {
            Ok(t) => corpus.push(t),
            Err(e) => eprintln!("skipping {e}"),
        }
    }
    Ok(corpus)
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Simplify { input, o } => {
            let text = fs::read_to_string(&input)?;
            let tree = parse_svg(&text)?;
            let (svg, report) = atomize_with_report(&tree)?;
            for w in report.warnings.iter().chain(&report.dropped) {
                eprintln!("note: {w}");
            }
            fs::write(o, svg.to_svg_string())?;
        }
        Cmd::Tokenize { input, o, binary } => {
            let t = encode(&read_svg(&input)?)?;
            write_tokens(&t, &o, binary)?;
        }
        Cmd::Detokenize { input, o } => {
            let t = read_token_file(&input)?;
            fs::write(o, decode(&t)?.to_svg_string())?;
        }
        Cmd::Render { input, o, size, ss } => {
            let opts = RenderOptions { size: size as usize, supersample: ss as usize, ..Default::default() };
            write_ppm(&rasterize(&read_svg(&input)?, &opts), o)?;
        }
        Cmd::Curate { input, manifest, out, clip_min, dedup_hamming, seed, split } => {
            let cfg = CurationConfig { clip_min, dedup_hamming, split_ratios: split, seed, ..Default::default() };
            let stats = curate(&input, manifest.as_deref(), &out, &cfg)?;
            print!("{}", stats.to_table());
        }
        Cmd::Stats { manifest } => print!("{}", stats_from_manifest(&manifest)?.to_table()),
        Cmd::Fit { input, o, order } => {
            let corpus = training_corpus(&input)?;
            let model = NgramModel::fit(&corpus, order as usize)?;
            write_model(&model, fs::File::create(&o)?)?;
            eprintln!("fit order-{order} model on {} sequences", corpus.len());
        }
        Cmd::Sample { model, n, top_k, top_p, temperature, seed, max_len, o } => {
            let model = read_model(fs::File::open(&model)?)?;
            let cfg = SamplerConfig { top_k: top_k as usize, top_p, temperature, seed, max_len };
            fs::create_dir_all(&o)?;
            for (i, t) in model.sample_many(&cfg, n).iter().enumerate() {
                write_tokens(t, &o.join(format!("sample_{i:05}.svgt")), true)?;
                fs::write(o.join(format!("sample_{i:05}.svg")), decode(t)?.to_svg_string())?;
            }
        }
        Cmd::Eval { pairs, o, export, size, ss } => {
            let opts = RenderOptions { size: size as usize, supersample: ss as usize, ..Default::default() };
            if let Some(dir) = &export {
                fs::create_dir_all(dir)?;
            }
            let pairs = read_pairs(&pairs)?;
            let mut lines = String::new();
            let mut records = Vec::new();
            for (pair, r) in pairs.iter().zip(evaluate_pairs(&pairs, &opts, export.as_deref())) {
                let r = match r {
                    Ok(r) => r,
                    Err(e) => {
                        eprintln!("skipped {}: {e}", pair.id);
                        continue;
                    }
                };
                lines.push_str(&serde_json::to_string(&r)?);
                lines.push('\n');
                records.push(r);
            }
            fs::write(&o, lines)?;
            let summary = serde_json::to_string_pretty(&aggregate(&records)?)? + "\n";
            fs::write(o.with_extension("summary.json"), &summary)?;
            print!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
