// SPDX-License-Identifier: Apache-2.0

//! Pixel and sequence measurements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomize::AtomicSvg;
use crate::raster::Raster;
use crate::token::{vocab::PAD, TokenSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("raster sizes differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("raster {0}x{1} is smaller than the 11x11 window")]
    TooSmall(usize, usize),
}

fn same_size(a: &Raster, b: &Raster) -> Result<(), MetricError> {
    if a.width != b.width || a.height != b.height {
        return Err(MetricError::DimensionMismatch(a.width, a.height, b.width, b.height));
    }
    Ok(())
}

/// Mean squared RGB difference on the [0,1] scale.
pub fn mse(a: &Raster, b: &Raster) -> Result<f64, MetricError> {
    same_size(a, b)?;
    let n = a.width * a.height * 3;
    if n == 0 {
        return Ok(0.0);
    }
    let sum: u64 = a
        .pixels
        .chunks_exact(4)
        .zip(b.pixels.chunks_exact(4))
        .flat_map(|(p, q)| (0..3).map(move |c| (p[c] as i64 - q[c] as i64).pow(2) as u64))
        .sum();
    Ok(sum as f64 / (255.0 * 255.0) / n as f64)
}

/// BT.601 luma on [0,255].
pub fn luma(r: &Raster) -> Vec<f64> {
    r.pixels.chunks_exact(4).map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64).collect()
}

const WINDOW: usize = 11;
const SIGMA: f64 = 1.5;
const C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn gaussian() -> [f64; WINDOW] {
    let mut k = [0.0; WINDOW];
    let mid = (WINDOW / 2) as f64;
    for (i, v) in k.iter_mut().enumerate() {
        let d = i as f64 - mid;
        *v = (-d * d / (2.0 * SIGMA * SIGMA)).exp();
    }
    let total: f64 = k.iter().sum();
    k.map(|v| v / total)
}

/// Separable valid-mode filter: output is (w-10) x (h-10).
fn filter(img: &[f64], w: usize, h: usize, k: &[f64; WINDOW]) -> Vec<f64> {
    let ow = w - WINDOW + 1;
    let oh = h - WINDOW + 1;
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        for x in 0..ow {
            rows[y * ow + x] = (0..WINDOW).map(|i| k[i] * img[y * w + x + i]).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = (0..WINDOW).map(|i| k[i] * rows[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Mean structural similarity of the luma planes.
pub fn ssim(a: &Raster, b: &Raster) -> Result<f64, MetricError> {
    same_size(a, b)?;
    let (w, h) = (a.width, a.height);
    if w < WINDOW || h < WINDOW {
        return Err(MetricError::TooSmall(w, h));
    }
    let k = gaussian();
    let (x, y) = (luma(a), luma(b));
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();
    let [mx, my, exx, eyy, exy] = [&x, &y, &xx, &yy, &xy].map(|img| filter(img, w, h, &k));

    let mut total = 0.0;
    for i in 0..mx.len() {
        let (m1, m2) = (mx[i], my[i]);
        let s1 = exx[i] - m1 * m1;
        let s2 = eyy[i] - m2 * m2;
        let s12 = exy[i] - m1 * m2;
        total += ((2.0 * m1 * m2 + C1) * (2.0 * s12 + C2)) / ((m1 * m1 + m2 * m2 + C1) * (s1 + s2 + C2));
    }
    Ok(total / mx.len() as f64)
}

/// Number of ids that are not padding.
pub fn token_length(t: &TokenSeq) -> usize {
    t.ids.iter().filter(|&&id| id != PAD).count()
}

/// Area-weighted box average of the luma plane into `ow` x `oh` cells.
fn box_downsample(r: &Raster, ow: usize, oh: usize) -> Vec<f64> {
    let y = luma(r);
    let weights = |n: usize, m: usize| -> Vec<Vec<(usize, f64)>> {
        let step = n as f64 / m as f64;
        (0..m)
            .map(|c| {
                let (lo, hi) = (c as f64 * step, (c + 1) as f64 * step);
                (lo.floor() as usize..(hi.ceil() as usize).min(n))
                    .map(|i| (i, (hi.min(i as f64 + 1.0) - lo.max(i as f64)) / step))
                    .filter(|&(_, wt)| wt > 0.0)
                    .collect()
            })
            .collect()
    };
    let (wx, wy) = (weights(r.width, ow), weights(r.height, oh));
    let mut out = vec![0.0; ow * oh];
    for (cy, ys) in wy.iter().enumerate() {
        for (cx, xs) in wx.iter().enumerate() {
            let mut acc = 0.0;
            for &(sy, fy) in ys {
                for &(sx, fx) in xs {
                    acc += fy * fx * y[sy * r.width + sx];
                }
            }
            out[cy * ow + cx] = acc;
        }
    }
    out
}

/// Difference hash: 9x8 grayscale, bit `8*row + col` set when a cell is
/// darker than its right neighbour.
pub fn dhash(r: &Raster) -> u64 {
    let g = box_downsample(r, 9, 8);
    let mut h = 0u64;
    for row in 0..8 {
        for col in 0..8 {
            if g[row * 9 + col] < g[row * 9 + col + 1] {
                h |= 1 << (row * 8 + col);
            }
        }
    }
    h
}

pub fn hamming(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Per-item evaluation record. Serializes to exactly
/// `id, mse, ssim, n_tokens, n_paths, n_commands`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub id: String,
    pub mse: f64,
    pub ssim: f64,
    pub n_tokens: usize,
    pub n_paths: usize,
    pub n_commands: usize,
    #[serde(skip)]
    pub command_histogram: BTreeMap<char, usize>,
}

pub fn command_histogram(svg: &AtomicSvg) -> BTreeMap<char, usize> {
    let mut h = BTreeMap::new();
    for c in svg.paths.iter().flat_map(|p| &p.commands) {
        *h.entry(c.letter()).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{rasterize, RenderOptions};

    fn gray(w: usize, h: usize, v: u8) -> Raster {
        Raster::filled(w, h, [v, v, v, 255])
    }

    fn from_fn(w: usize, h: usize, f: impl Fn(usize, usize) -> u8) -> Raster {
        let mut r = gray(w, h, 0);
        for y in 0..h {
            for x in 0..w {
                let v = f(x, y);
                r.pixels[4 * (y * w + x)..][..3].fill(v);
            }
        }
        r
    }

    fn invert(r: &Raster) -> Raster {
        let mut o = r.clone();
        for p in o.pixels.chunks_exact_mut(4) {
            for c in &mut p[..3] {
                *c = 255 - *c;
            }
        }
        o
    }

    fn shift(r: &Raster, dx: usize) -> Raster {
        from_fn(r.width, r.height, |x, y| r.rgb((x + r.width - dx) % r.width, y)[0])
    }

    #[test]
    fn mse_values() {
        let (w, b) = (gray(20, 20, 255), gray(20, 20, 0));
        assert_eq!(mse(&w, &w).unwrap(), 0.0);
        assert_eq!(mse(&b, &w).unwrap(), 1.0);
        let half = from_fn(20, 20, |x, _| if x < 10 { 0 } else { 255 });
        assert_eq!(mse(&half, &w).unwrap(), 0.5);
        assert!(matches!(mse(&w, &gray(20, 21, 0)), Err(MetricError::DimensionMismatch(..))));
    }

    #[test]
    fn ssim_identity_and_symmetry() {
        let a = from_fn(40, 30, |x, y| ((x * 7 + y * 13) % 256) as u8);
        let b = from_fn(40, 30, |x, y| ((x * x + y) % 256) as u8);
        assert_eq!(ssim(&a, &a).unwrap(), 1.0);
        assert!((ssim(&a, &b).unwrap() - ssim(&b, &a).unwrap()).abs() < 1e-12);
        assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
    }

    #[test]
    fn ssim_inverted_binary_is_negative() {
        let a = from_fn(40, 40, |x, y| if (x / 3 + y / 5) % 2 == 0 { 0 } else { 255 });
        assert!(ssim(&a, &invert(&a)).unwrap() < 0.0);
    }

    #[test]
    fn ssim_constant_offset_closed_form() {
        let (m1, m2) = (128.0, 138.0);
        let want = (2.0 * m1 * m2 + C1) / (m1 * m1 + m2 * m2 + C1);
        let got = ssim(&gray(20, 20, 128), &gray(20, 20, 138)).unwrap();
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!(got > 0.0 && got < 1.0);
    }

    #[test]
    fn ssim_too_small() {
        assert_eq!(ssim(&gray(10, 20, 0), &gray(10, 20, 0)), Err(MetricError::TooSmall(10, 20)));
    }

    #[test]
    fn ssim_falls_with_shift() {
        let svg = crate::atomize::atomize_str(
            r#"<svg viewBox="0 0 100 100"><circle cx="40" cy="50" r="25" fill="navy"/>
               <rect x="60" y="10" width="30" height="60" fill="orange"/></svg>"#,
        )
        .unwrap();
        let r = rasterize(&svg, &RenderOptions::default());
        let mut prev = 1.0;
        for d in [1, 2, 4, 8] {
            let s = ssim(&r, &shift(&r, d)).unwrap();
            assert!(s <= prev, "shift {d}: {s} > {prev}");
            prev = s;
        }
    }

    #[test]
    fn token_lengths() {
        let t = |ids: Vec<u32>| token_length(&TokenSeq::new(ids));
        assert_eq!(t(vec![1, 8, 43856, 3, 2026, 7, 2]), 7);
        assert_eq!(t(vec![]), 0);
        assert_eq!(t(vec![1, 8, 43856, 3, 2026, 7, 2, 0, 0, 0]), 7);
    }

    #[test]
    fn dhash_properties() {
        let a = from_fn(200, 200, |x, y| ((x + 2 * y) % 200) as u8);
        assert_eq!(hamming(dhash(&a), dhash(&a)), 0);
        let ramp = from_fn(200, 200, |x, y| ((x * 255 / 199) as i64 - (y as i64 % 3)).max(0) as u8);
        assert_eq!(hamming(dhash(&ramp), dhash(&invert(&ramp))), 64);
        let mut noisy = a.clone();
        noisy.pixels[4 * (77 * 200 + 123)..][..3].fill(255);
        assert!(hamming(dhash(&a), dhash(&noisy)) <= 2);
    }

    #[test]
    fn box_downsample_preserves_mean() {
        let a = from_fn(200, 200, |x, y| ((x * 3 + y) % 256) as u8);
        let g = box_downsample(&a, 9, 8);
        let mean_src: f64 = luma(&a).iter().sum::<f64>() / 40000.0;
        let mean_dst: f64 = g.iter().sum::<f64>() / 72.0;
        assert!((mean_src - mean_dst).abs() < 1e-9);
    }

    #[test]
    fn report_json_keys() {
        let r = MetricReport {
            id: "x".into(),
            mse: 0.0,
            ssim: 1.0,
            n_tokens: 7,
            n_paths: 1,
            n_commands: 2,
            command_histogram: BTreeMap::from([('M', 1)]),
        };
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut want = vec!["id", "mse", "ssim", "n_tokens", "n_paths", "n_commands"];
        want.sort();
        assert_eq!(keys, want);
    }
}
