// SPDX-License-Identifier: Apache-2.0

use super::arc::arc_to_cubics;
use super::{ArcSegment, AtomicCommand, AtomizeError};
use crate::geom::{AffineTransform, Point};

/// Maps absolute atomic commands through `t`.
///
/// Arcs survive similarity transforms (radii scale, rotation follows the
/// transform, sweep flips under a mirror). Any other transform turns each arc
/// into cubics before mapping.
pub fn apply_transform(cmds: &[AtomicCommand], t: &AffineTransform) -> Result<Vec<AtomicCommand>, AtomizeError> {
    if t.is_identity() {
        return Ok(cmds.to_vec());
    }
    let det = t.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(AtomizeError::SingularTransform);
    }
    let conformal = t.as_conformal();

    let mut out = Vec::with_capacity(cmds.len());
    let mut cur = Point::default();
    let mut start = Point::default();
    for cmd in cmds {
        match *cmd {
            AtomicCommand::M(p) => {
                out.push(AtomicCommand::M(t.apply(p)));
                cur = p;
                start = p;
            }
            AtomicCommand::L(p) => {
                out.push(AtomicCommand::L(t.apply(p)));
                cur = p;
            }
            AtomicCommand::C(c1, c2, p) => {
                out.push(AtomicCommand::C(t.apply(c1), t.apply(c2), t.apply(p)));
                cur = p;
            }
            AtomicCommand::A(arc) => {
                match conformal {
                    Some(c) => {
                        let rot = if c.mirrored { c.angle_deg - arc.rot_deg } else { arc.rot_deg + c.angle_deg };
                        out.push(AtomicCommand::A(ArcSegment {
                            rx: arc.rx * c.scale,
                            ry: arc.ry * c.scale,
                            rot_deg: rot,
                            large_arc: arc.large_arc,
                            sweep: arc.sweep != c.mirrored,
                            to: t.apply(arc.to),
                        }));
                    }
                    None => {
                        for [c1, c2, p] in arc_to_cubics(cur, &arc) {
                            out.push(AtomicCommand::C(t.apply(c1), t.apply(c2), t.apply(p)));
                        }
                    }
                }
                cur = arc.to;
            }
            AtomicCommand::Z => {
                out.push(AtomicCommand::Z);
                cur = start;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::arc::to_center;
    use super::*;
    use crate::scene::parse_transform;
    use AtomicCommand::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn rotated_rect_corner() {
        let rect = vec![M(p(50.0, 5.0)), L(p(90.0, 5.0)), L(p(90.0, 45.0)), L(p(50.0, 45.0)), Z];
        let t = parse_transform("rotate(45)").unwrap();
        let got = apply_transform(&rect, &t).unwrap();
        let M(corner) = got[0] else { panic!() };
        // (x cos - y sin, x sin + y cos) with cos = sin = sqrt(2)/2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = p(50.0 * h - 5.0 * h, 50.0 * h + 5.0 * h);
        assert!(corner.distance(expect) < 1e-12);
        assert!((corner.x - 31.82).abs() < 0.01 && (corner.y - 38.89).abs() < 0.01);
    }

    #[test]
    fn identity_is_unchanged() {
        let cmds = vec![
            M(p(1.5, 2.0)),
            A(ArcSegment { rx: 3.0, ry: 4.0, rot_deg: 10.0, large_arc: true, sweep: false, to: p(7.0, 7.0) }),
            Z,
        ];
        assert_eq!(apply_transform(&cmds, &AffineTransform::IDENTITY).unwrap(), cmds);
    }

    #[test]
    fn uniform_scale_scales_arc_radii() {
        let arc = ArcSegment { rx: 10.0, ry: 10.0, rot_deg: 0.0, large_arc: false, sweep: true, to: p(20.0, 0.0) };
        let got = apply_transform(&[M(p(0.0, 0.0)), A(arc)], &AffineTransform::scale(2.0, 2.0)).unwrap();
        let A(scaled) = got[1] else { panic!() };
        assert_eq!(scaled.rx, 20.0);
        assert_eq!(scaled.ry, 20.0);
        assert_eq!(scaled.to, p(40.0, 0.0));
        assert_eq!(scaled.sweep, arc.sweep);
    }

    /// The transformed arc's center must be the transformed original center,
    /// for rotations and mirrors alike.
    #[test]
    fn conformal_arc_geometry_is_preserved() {
        let from = p(10.0, 20.0);
        let arc = ArcSegment { rx: 30.0, ry: 12.0, rot_deg: 25.0, large_arc: true, sweep: false, to: p(40.0, 35.0) };
        let original = to_center(from, &arc).unwrap();
        for spec in ["rotate(33) scale(1.5)", "scale(-2, 2)", "matrix(0 1 1 0 5 5)", "rotate(200) translate(3 4)"] {
            let t = parse_transform(spec).unwrap();
            let got = apply_transform(&[M(from), A(arc)], &t).unwrap();
            let (M(nf), A(na)) = (got[0], got[1]) else { panic!() };
            let moved = to_center(nf, &na).unwrap();
            assert!(moved.center.distance(t.apply(original.center)) < 1e-9, "{spec}");
            // a point midway along the sweep maps onto the new arc
            let mid = original.point_at(original.start_angle + original.sweep_angle / 2.0);
            let mid_new = moved.point_at(moved.start_angle + moved.sweep_angle / 2.0);
            assert!(t.apply(mid).distance(mid_new) < 1e-9, "{spec}");
        }
    }

    #[test]
    fn skew_converts_arcs_to_cubics() {
        let arc = ArcSegment { rx: 10.0, ry: 10.0, rot_deg: 0.0, large_arc: false, sweep: true, to: p(20.0, 0.0) };
        let t = parse_transform("skewX(20)").unwrap();
        let got = apply_transform(&[M(p(0.0, 0.0)), A(arc), Z], &t).unwrap();
        assert!(got.iter().all(|c| !matches!(c, A(_))));
        assert_eq!(got.iter().filter(|c| matches!(c, C(..))).count(), 2);
    }

    #[test]
    fn singular() {
        let t = AffineTransform::scale(0.0, 1.0);
        assert_eq!(apply_transform(&[M(p(0.0, 0.0))], &t), Err(AtomizeError::SingularTransform));
    }
}
