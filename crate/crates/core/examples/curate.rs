// SPDX-License-Identifier: Apache-2.0

//! Build a dataset from a directory of SVGs: dedup, filter, split and
//! write tokens, rasters and a manifest.
//!
//! `cargo run --example curate [input_dir] [out_dir]`

use std::path::PathBuf;

use atomsvg::curate::{curate, read_manifest, CurationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let input = args.next().unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus"));
    let out = args.next().unwrap_or_else(|| std::env::temp_dir().join("atomsvg_dataset"));

    let cfg = CurationConfig { seed: 1, ..Default::default() };
    let stats = curate(&input, None, &out, &cfg)?;
    print!("{}", stats.to_table());
    assert!(stats.reconciles());

    for r in read_manifest(&out.join("manifest.jsonl"))?.iter().take(3) {
        println!("{} -> {:?}, {} tokens", r.id, r.split, r.n_tokens);
    }
    println!("dataset in {}", out.display());
    Ok(())
}
