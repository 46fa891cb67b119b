// SPDX-License-Identifier: Apache-2.0

//! Encode an atomic SVG as token ids, decode it back and compare the
//! length against a digit-per-token encoding.
//!
//! `cargo run --example tokenize [file.svg]`

use std::path::PathBuf;

use atomsvg::atomize::atomize_str;
use atomsvg::token::io::to_text;
use atomsvg::token::{class_of, decode, digit_baseline_len, encode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/18_icon_heart.svg"));
    let svg = atomize_str(&std::fs::read_to_string(&path)?)?;
    let tokens = encode(&svg)?;

    for &id in tokens.ids.iter().take(12) {
        println!("{id:>6}  {:?}", class_of(id));
    }
    println!("... {} tokens total", tokens.len());
    println!("text form: {}", to_text(&tokens).lines().next().unwrap_or(""));

    let back = decode(&tokens)?;
    assert_eq!(back, svg);
    println!("round trip ok");

    let baseline = digit_baseline_len(&svg);
    println!(
        "parameterized {} vs digit baseline {baseline} ({:.2}x)",
        tokens.len(),
        tokens.len() as f64 / baseline as f64
    );
    Ok(())
}
