// SPDX-License-Identifier: Apache-2.0

use crate::atomize::{arc_to_cubics, AtomicCommand, AtomicPath};
use crate::geom::Point;

const MAX_DEPTH: u32 = 16;

/// Distance from `p` to the segment `a`-`b`.
fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let ap = p - a;
    let t = ((ap.x * ab.x + ap.y * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Appends the flattened cubic (excluding `p0`) to `out`.
pub fn flatten_cubic(p0: Point, c1: Point, c2: Point, p3: Point, tolerance: f64, out: &mut Vec<Point>) {
    subdivide(p0, c1, c2, p3, tolerance, 0, out);
}

fn subdivide(p0: Point, c1: Point, c2: Point, p3: Point, tol: f64, depth: u32, out: &mut Vec<Point>) {
    let flat = segment_distance(c1, p0, p3).max(segment_distance(c2, p0, p3));
    if flat <= tol || depth >= MAX_DEPTH {
        out.push(p3);
        return;
    }
    // de Casteljau at t = 1/2
    let a = p0.lerp(c1, 0.5);
    let b = c1.lerp(c2, 0.5);
    let c = c2.lerp(p3, 0.5);
    let ab = a.lerp(b, 0.5);
    let bc = b.lerp(c, 0.5);
    let mid = ab.lerp(bc, 0.5);
    subdivide(p0, a, ab, mid, tol, depth + 1, out);
    subdivide(mid, bc, c, p3, tol, depth + 1, out);
}

/// One closed polygon per subpath. The closing vertex is implicit and is
/// not repeated; subpaths with fewer than three vertices are dropped.
pub fn flatten_path(path: &AtomicPath, tolerance: f64) -> Vec<Vec<Point>> {
    let mut polys = Vec::new();
    let mut cur: Vec<Point> = Vec::new();
    let mut pen = Point::default();

    let mut finish = |poly: &mut Vec<Point>| {
        if poly.len() > 1 && poly.first() == poly.last() {
            poly.pop();
        }
        if poly.len() >= 3 {
            polys.push(std::mem::take(poly));
        } else {
            poly.clear();
        }
    };

    for cmd in &path.commands {
        match *cmd {
            AtomicCommand::M(p) => {
                finish(&mut cur);
                cur.push(p);
                pen = p;
            }
            AtomicCommand::L(p) => {
                cur.push(p);
                pen = p;
            }
            AtomicCommand::C(c1, c2, p) => {
                flatten_cubic(pen, c1, c2, p, tolerance, &mut cur);
                pen = p;
            }
            AtomicCommand::A(arc) => {
                for [c1, c2, p] in arc_to_cubics(pen, &arc) {
                    flatten_cubic(pen, c1, c2, p, tolerance, &mut cur);
                    pen = p;
                }
                pen = arc.to;
            }
            AtomicCommand::Z => {
                pen = cur.first().copied().unwrap_or(pen);
                finish(&mut cur);
            }
        }
    }
    finish(&mut cur);
    polys
}
