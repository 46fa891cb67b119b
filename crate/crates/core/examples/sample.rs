// SPDX-License-Identifier: Apache-2.0

//! Fit a trigram model on the bundled corpus and draw grammar-valid
//! samples.
//!
//! `cargo run --release --example sample [n]`

use std::path::PathBuf;

use atomsvg::atomize::atomize_str;
use atomsvg::ngram::{NgramModel, SamplerConfig};
use atomsvg::token::{decode, encode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    files.sort();
    let corpus = files
        .iter()
        .map(|f| Ok(encode(&atomize_str(&std::fs::read_to_string(f)?)?)?))
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;

    let model = NgramModel::fit(&corpus, 3)?;
    println!("fit on {} documents; train perplexity {:.2}", corpus.len(), model.perplexity(&corpus)?);

    let cfg = SamplerConfig { seed: 42, top_k: 20, max_len: 400, ..Default::default() };
    for (i, t) in model.sample_many(&cfg, n).iter().enumerate() {
        let svg = decode(t)?;
        println!("sample {i}: {} tokens, {} paths", t.len(), svg.paths.len());
        print!("{}", svg.to_svg_string());
    }
    Ok(())
}
