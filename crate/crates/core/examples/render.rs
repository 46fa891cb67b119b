// SPDX-License-Identifier: Apache-2.0

//! Rasterize an SVG to a binary PPM.
//!
//! `cargo run --example render [file.svg] [out.ppm]`

use std::path::PathBuf;

use atomsvg::atomize::atomize_str;
use atomsvg::raster::{rasterize, write_ppm, RenderOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args_os().skip(1).map(PathBuf::from);
    let input =
        args.next().unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/08_evenodd_ring.svg"));
    let output = args.next().unwrap_or_else(|| std::env::temp_dir().join("atomsvg_render.ppm"));

    let svg = atomize_str(&std::fs::read_to_string(&input)?)?;
    let opts = RenderOptions { size: 100, supersample: 4, ..Default::default() };
    let img = rasterize(&svg, &opts);

    let inked = img.pixels.chunks(4).filter(|p| p[0] < 128 || p[1] < 128 || p[2] < 128).count();
    println!("{}x{} raster, {inked} dark-ish pixels, center {:?}", img.width, img.height, img.rgb(50, 50));
    write_ppm(&img, &output)?;
    println!("wrote {}", output.display());
    Ok(())
}
