// SPDX-License-Identifier: Apache-2.0

use crate::scene::{RawPathCommand, ShapeKind};

/// Control-point offset of a quarter circle drawn with one cubic, as a
/// fraction of the radius.
pub const CIRCLE_KAPPA: f64 = 4.0 / 3.0 * (std::f64::consts::SQRT_2 - 1.0);

/// Converts a basic shape into absolute path commands. Zero-size shapes
/// (no width, height or radius) come back as an empty list.
pub fn shape_to_path(kind: &ShapeKind) -> Vec<RawPathCommand> {
    let cmd = |l: char, a: &[f64]| RawPathCommand::new(l, a.to_vec());
    match *kind {
        ShapeKind::Rect { x, y, width: w, height: h, rx, ry } => {
            if w <= 0.0 || h <= 0.0 {
                return Vec::new();
            }
            if rx > 0.0 && ry > 0.0 {
                let arc = |ex: f64, ey: f64| cmd('A', &[rx, ry, 0.0, 0.0, 1.0, ex, ey]);
                return vec![
                    cmd('M', &[x + rx, y]),
                    cmd('L', &[x + w - rx, y]),
                    arc(x + w, y + ry),
                    cmd('L', &[x + w, y + h - ry]),
                    arc(x + w - rx, y + h),
                    cmd('L', &[x + rx, y + h]),
                    arc(x, y + h - ry),
                    cmd('L', &[x, y + ry]),
                    arc(x + rx, y),
                    cmd('Z', &[]),
                ];
            }
            vec![
                cmd('M', &[x, y]),
                cmd('L', &[x + w, y]),
                cmd('L', &[x + w, y + h]),
                cmd('L', &[x, y + h]),
                cmd('Z', &[]),
            ]
        }
        ShapeKind::Circle { cx, cy, r } => ellipse(cx, cy, r, r),
        ShapeKind::Ellipse { cx, cy, rx, ry } => ellipse(cx, cy, rx, ry),
        ShapeKind::Line { x1, y1, x2, y2 } => {
            if x1 == x2 && y1 == y2 {
                return Vec::new();
            }
            vec![cmd('M', &[x1, y1]), cmd('L', &[x2, y2])]
        }
        ShapeKind::Polyline { ref points } | ShapeKind::Polygon { ref points } => {
            if points.len() < 4 {
                return Vec::new();
            }
            let mut out: Vec<RawPathCommand> =
                points.chunks_exact(2).enumerate().map(|(i, p)| cmd(if i == 0 { 'M' } else { 'L' }, p)).collect();
            if matches!(kind, ShapeKind::Polygon { .. }) {
                out.push(cmd('Z', &[]));
            }
            out
        }
    }
}

fn ellipse(cx: f64, cy: f64, rx: f64, ry: f64) -> Vec<RawPathCommand> {
    if rx <= 0.0 || ry <= 0.0 {
        return Vec::new();
    }
    let kx = rx * CIRCLE_KAPPA;
    let ky = ry * CIRCLE_KAPPA;
    let c = |a: [f64; 6]| RawPathCommand::new('C', a.to_vec());
    vec![
        RawPathCommand::new('M', vec![cx + rx, cy]),
        c([cx + rx, cy + ky, cx + kx, cy + ry, cx, cy + ry]),
        c([cx - kx, cy + ry, cx - rx, cy + ky, cx - rx, cy]),
        c([cx - rx, cy - ky, cx - kx, cy - ry, cx, cy - ry]),
        c([cx + kx, cy - ry, cx + rx, cy - ky, cx + rx, cy]),
        RawPathCommand::new('Z', vec![]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_is_four_lines() {
        let got = shape_to_path(&ShapeKind::Rect { x: 80.0, y: 90.0, width: 100.0, height: 100.0, rx: 0.0, ry: 0.0 });
        let letters: String = got.iter().map(|c| c.letter).collect();
        assert_eq!(letters, "MLLLZ");
        let pts: Vec<&[f64]> = got[..4].iter().map(|c| c.args.as_slice()).collect();
        assert_eq!(pts, vec![&[80.0, 90.0][..], &[180.0, 90.0], &[180.0, 190.0], &[80.0, 190.0]]);
    }

    #[test]
    fn circle_kappa_and_first_quadrant() {
        let got = shape_to_path(&ShapeKind::Circle { cx: 50.0, cy: 50.0, r: 50.0 });
        assert_eq!(got[0].args, vec![100.0, 50.0]);
        let c = &got[1].args;
        assert!((c[1] - 77.614).abs() < 1e-3);
        assert!((c[2] - 77.614).abs() < 1e-3);
        assert_eq!(&c[4..], &[50.0, 100.0]);
        assert_eq!(got.iter().filter(|c| c.letter == 'C').count(), 4);
    }

    /// Independent check of the kappa constant: sample each quadrant cubic
    /// and measure distance from the center.
    #[test]
    fn circle_radial_deviation_oracle() {
        let r = 50.0;
        let got = shape_to_path(&ShapeKind::Circle { cx: 0.0, cy: 0.0, r });
        let mut p0 = (got[0].args[0], got[0].args[1]);
        for seg in &got[1..5] {
            let a = &seg.args;
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                let mt = 1.0 - t;
                let b = [mt * mt * mt, 3.0 * mt * mt * t, 3.0 * mt * t * t, t * t * t];
                let x = b[0] * p0.0 + b[1] * a[0] + b[2] * a[2] + b[3] * a[4];
                let y = b[0] * p0.1 + b[1] * a[1] + b[2] * a[3] + b[3] * a[5];
                assert!((x.hypot(y) - r).abs() < 0.001 * r);
            }
            p0 = (a[4], a[5]);
        }
    }

    #[test]
    fn degenerate_shapes_are_empty() {
        let zero = ShapeKind::Rect { x: 0.0, y: 0.0, width: 0.0, height: 10.0, rx: 0.0, ry: 0.0 };
        assert!(shape_to_path(&zero).is_empty());
        assert!(shape_to_path(&ShapeKind::Circle { cx: 1.0, cy: 1.0, r: 0.0 }).is_empty());
        assert!(shape_to_path(&ShapeKind::Line { x1: 1.0, y1: 1.0, x2: 1.0, y2: 1.0 }).is_empty());
    }

    #[test]
    fn polygon_closes_polyline_does_not() {
        let pts = vec![0.0, 0.0, 10.0, 0.0, 10.0, 10.0];
        let pg: String = shape_to_path(&ShapeKind::Polygon { points: pts.clone() }).iter().map(|c| c.letter).collect();
        let pl: String = shape_to_path(&ShapeKind::Polyline { points: pts }).iter().map(|c| c.letter).collect();
        assert_eq!(pg, "MLLZ");
        assert_eq!(pl, "MLL");
    }

    #[test]
    fn rounded_rect_uses_arcs() {
        let got = shape_to_path(&ShapeKind::Rect { x: 0.0, y: 0.0, width: 20.0, height: 10.0, rx: 2.0, ry: 2.0 });
        assert_eq!(got.iter().filter(|c| c.letter == 'A').count(), 4);
    }
}
