// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use std::path::PathBuf;

use atomsvg::atomize::{
    apply_transform, atomize_str, flatten_and_fit, quantize, ArcSegment, AtomicCommand, AtomicPath, AtomicSvg,
};
use atomsvg::geom::{AffineTransform, Point};
use atomsvg::scene::{parse_svg, FillRule};
use rand_core::RngCore;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// `(file name, text)` for every corpus SVG, sorted by name.
pub fn corpus() -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "svg"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

pub fn corpus_atomic() -> Vec<(String, AtomicSvg)> {
    corpus()
        .into_iter()
        .map(|(n, t)| {
            let s = atomize_str(&t).unwrap();
            (n, s)
        })
        .collect()
}

/// The fitted scene before grid quantization.
pub fn float_scene(text: &str) -> AtomicSvg {
    AtomicSvg { paths: flatten_and_fit(&parse_svg(text).unwrap()).unwrap().0 }
}

fn below(rng: &mut impl RngCore, n: u64) -> u64 {
    rng.next_u64() % n
}

fn grid_point(rng: &mut impl RngCore) -> Point {
    Point::new(below(rng, 200) as f64, below(rng, 200) as f64)
}

/// A random document satisfying the atomic invariants: integer grid
/// coordinates, 4-bit colors, every subpath starting with M and drawing at
/// least one segment.
pub fn random_atomic_svg(rng: &mut impl RngCore) -> AtomicSvg {
    let n_paths = 1 + below(rng, 4) as usize;
    let mut paths = Vec::with_capacity(n_paths);
    for _ in 0..n_paths {
        let fill = [0; 3].map(|_: u8| (below(rng, 16) * 17) as u8);
        let fill_rule = if below(rng, 4) == 0 { FillRule::EvenOdd } else { FillRule::NonZero };
        let mut commands = Vec::new();
        for _ in 0..1 + below(rng, 3) {
            commands.push(AtomicCommand::M(grid_point(rng)));
            for _ in 0..1 + below(rng, 6) {
                let c = match below(rng, 3) {
                    0 => AtomicCommand::L(grid_point(rng)),
                    1 => AtomicCommand::C(grid_point(rng), grid_point(rng), grid_point(rng)),
                    _ => AtomicCommand::A(ArcSegment {
                        rx: 1.0 + below(rng, 199) as f64,
                        ry: 1.0 + below(rng, 199) as f64,
                        rot_deg: below(rng, 360) as f64,
                        large_arc: below(rng, 2) == 1,
                        sweep: below(rng, 2) == 1,
                        to: grid_point(rng),
                    }),
                };
                commands.push(c);
            }
            if below(rng, 2) == 0 {
                commands.push(AtomicCommand::Z);
            }
        }
        paths.push(AtomicPath { fill, fill_rule, commands });
    }
    AtomicSvg { paths }
}

/// A random similarity transform about the canvas center plus a hue
/// rotation of the fills, re-quantized onto the grid.
pub fn augment(svg: &AtomicSvg, rng: &mut impl RngCore) -> AtomicSvg {
    let angle = [0.0, 90.0, 180.0, 270.0, 15.0, -20.0][below(rng, 6) as usize];
    let s = 0.6 + below(rng, 40) as f64 / 100.0;
    let mirror = below(rng, 2) == 0;
    let t = AffineTransform::translate(100.0, 100.0)
        .compose(&AffineTransform::rotate_deg(angle))
        .compose(&AffineTransform::scale(if mirror { -s } else { s }, s))
        .compose(&AffineTransform::translate(-100.0, -100.0));
    let shift = below(rng, 3) as usize;
    let paths: Vec<AtomicPath> = svg
        .paths
        .iter()
        .map(|p| AtomicPath {
            fill: [p.fill[shift % 3], p.fill[(shift + 1) % 3], p.fill[(shift + 2) % 3]],
            fill_rule: p.fill_rule,
            commands: apply_transform(&p.commands, &t).unwrap(),
        })
        .collect();
    quantize(&paths)
}
