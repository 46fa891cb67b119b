// SPDX-License-Identifier: Apache-2.0

//! Pixel metrics between a source SVG and its atomic rewrite, plus the
//! perceptual hash used for near-duplicate detection.

use std::path::PathBuf;

use atomsvg::atomize::{atomize_str, flatten_and_fit, AtomicSvg};
use atomsvg::metrics::{dhash, hamming, mse, ssim};
use atomsvg::raster::{rasterize, RenderOptions};
use atomsvg::scene::parse_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/11_arcs.svg"));
    let text = std::fs::read_to_string(&path)?;
    let opts = RenderOptions::default();

    // float geometry before grid snapping serves as the reference
    let (paths, _) = flatten_and_fit(&parse_svg(&text)?)?;
    let reference = rasterize(&AtomicSvg { paths }, &opts);
    let atomic = rasterize(&atomize_str(&text)?, &opts);

    println!("mse  {:.5}", mse(&reference, &atomic)?);
    println!("ssim {:.4}", ssim(&reference, &atomic)?);
    let (a, b) = (dhash(&reference), dhash(&atomic));
    println!("dhash {a:016x} vs {b:016x}, hamming {}", hamming(a, b));
    Ok(())
}
