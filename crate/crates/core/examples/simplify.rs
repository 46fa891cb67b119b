// SPDX-License-Identifier: Apache-2.0

//! Parse an SVG and rewrite it in atomic form.
//!
//! `cargo run --example simplify [file.svg]`

use std::path::PathBuf;

use atomsvg::atomize::atomize_with_report;
use atomsvg::scene::parse_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/12_nested_transforms.svg"));
    let tree = parse_svg(&std::fs::read_to_string(&path)?)?;
    println!("{}: {} leaf nodes, viewBox {:?}", path.display(), tree.leaves().len(), tree.viewbox);

    let (svg, report) = atomize_with_report(&tree)?;
    for note in report.warnings.iter().chain(&report.dropped) {
        println!("note: {note}");
    }
    println!("{} paths, {} commands, {} arcs converted", svg.paths.len(), svg.command_count(), report.converted_arcs);
    print!("{}", svg.to_svg_string());
    Ok(())
}
