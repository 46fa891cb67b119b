// SPDX-License-Identifier: Apache-2.0

//! Supersampled scanline rendering of atomic documents.

mod flatten;
mod ppm;

pub use flatten::{flatten_cubic, flatten_path};
pub use ppm::{decode_ppm, encode_ppm, read_ppm, write_ppm, RasterError};

use crate::atomize::{AtomicSvg, CANVAS};
use crate::geom::Point;
use crate::scene::FillRule;

/// Row-major RGBA image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn filled(width: usize, height: usize, rgba: [u8; 4]) -> Self {
        Raster { width, height, pixels: rgba.repeat(width * height) }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 4] {
        let i = 4 * (y * self.width + x);
        self.pixels[i..i + 4].try_into().unwrap()
    }

    pub fn rgb(&self, x: usize, y: usize) -> [u8; 3] {
        let [r, g, b, _] = self.pixel(x, y);
        [r, g, b]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    pub size: usize,
    pub supersample: usize,
    /// Curve flattening tolerance in viewBox units.
    pub flatten_tolerance: f64,
    pub background: [u8; 4],
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 200, supersample: 4, flatten_tolerance: 0.1, background: [255, 255, 255, 255] }
    }
}

struct Edge {
    y0: f64,
    y1: f64,
    x0: f64,
    dxdy: f64,
    dir: i32,
}

fn edges(polys: &[Vec<Point>], scale: f64) -> Vec<Edge> {
    let mut out = Vec::new();
    for poly in polys {
        for (i, &a) in poly.iter().enumerate() {
            let b = poly[(i + 1) % poly.len()];
            let (a, b) = (a * scale, b * scale);
            if a.y == b.y {
                continue;
            }
            let (lo, hi, dir) = if a.y < b.y { (a, b, 1) } else { (b, a, -1) };
            out.push(Edge { y0: lo.y, y1: hi.y, x0: lo.x, dxdy: (hi.x - lo.x) / (hi.y - lo.y), dir });
        }
    }
    out
}

/// Marks the samples covered by `polys` in `mask` (side `n`).
fn cover(polys: &[Vec<Point>], rule: FillRule, n: usize, mask: &mut [bool]) {
    mask.fill(false);
    let scale = n as f64 / CANVAS;
    let edges = edges(polys, scale);
    let mut crossings: Vec<(f64, i32)> = Vec::new();
    for row in 0..n {
        let yc = row as f64 + 0.5;
        crossings.clear();
        for e in &edges {
            if e.y0 <= yc && yc < e.y1 {
                crossings.push((e.x0 + (yc - e.y0) * e.dxdy, e.dir));
            }
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut winding = 0;
        for (k, &(x, dir)) in crossings.iter().enumerate() {
            winding += dir;
            let inside = match rule {
                FillRule::NonZero => winding != 0,
                FillRule::EvenOdd => k % 2 == 0,
            };
            if !inside || k + 1 == crossings.len() {
                continue;
            }
            // samples with center in [x, x_next)
            let first = (x - 0.5).ceil().max(0.0) as usize;
            let last = ((crossings[k + 1].0 - 0.5).ceil().max(0.0) as usize).min(n);
            let line = &mut mask[row * n..(row + 1) * n];
            for s in line.iter_mut().take(last).skip(first) {
                *s = true;
            }
        }
    }
}

fn over(dst: &mut [u8], src: [u8; 4]) {
    let a = src[3] as u32;
    if a == 255 {
        dst.copy_from_slice(&src);
        return;
    }
    for c in 0..3 {
        dst[c] = ((src[c] as u32 * a + dst[c] as u32 * (255 - a) + 127) / 255) as u8;
    }
    dst[3] = (a + (dst[3] as u32 * (255 - a) + 127) / 255) as u8;
}

/// Paints the paths in order over the background and box-filters the
/// supersamples down to `size` x `size`.
pub fn rasterize(svg: &AtomicSvg, opts: &RenderOptions) -> Raster {
    assert!(opts.size >= 1 && opts.supersample >= 1 && opts.flatten_tolerance > 0.0);
    let ss = opts.supersample;
    let n = opts.size * ss;
    let mut samples = opts.background.repeat(n * n);
    let mut mask = vec![false; n * n];
    for path in &svg.paths {
        let polys = flatten_path(path, opts.flatten_tolerance);
        if polys.is_empty() {
            continue;
        }
        cover(&polys, path.fill_rule, n, &mut mask);
        let [r, g, b] = path.fill;
        for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            over(&mut samples[4 * i..4 * i + 4], [r, g, b, 255]);
        }
    }

    let size = opts.size;
    let count = (ss * ss) as u32;
    let mut out = Raster::filled(size, size, [0; 4]);
    for py in 0..size {
        for px in 0..size {
            let mut acc = [0u32; 4];
            for sy in 0..ss {
                let row = (py * ss + sy) * n;
                for sx in 0..ss {
                    let i = 4 * (row + px * ss + sx);
                    for c in 0..4 {
                        acc[c] += samples[i + c] as u32;
                    }
                }
            }
            let o = 4 * (py * size + px);
            // mean rounded half up; values are non-negative
            for (dst, a) in out.pixels[o..o + 4].iter_mut().zip(acc) {
                *dst = ((2 * a + count) / (2 * count)) as u8;
            }
        }
    }
    out
}
