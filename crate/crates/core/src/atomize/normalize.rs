// SPDX-License-Identifier: Apache-2.0

use super::arc::corrected_radii;
use super::{drop_empty_subpaths, ArcSegment, AtomicCommand, AtomizeError};
use crate::geom::Point;
use crate::scene::RawPathCommand;

/// Rewrites raw path commands into absolute M/L/C/A/Z.
///
/// Relative commands are resolved, H/V become L, quadratic and smooth
/// segments become cubics, zero-radius arcs become lines and undersized arc
/// radii are scaled up. A drawing command after Z reopens the subpath with an
/// explicit M at the previous subpath start.
pub fn normalize_commands(cmds: &[RawPathCommand]) -> Result<Vec<AtomicCommand>, AtomizeError> {
    let Some(first) = cmds.first() else {
        return Ok(Vec::new());
    };
    if !first.letter.eq_ignore_ascii_case(&'m') {
        return Err(AtomizeError::PathStartsWithoutMove);
    }

    let mut out: Vec<AtomicCommand> = Vec::with_capacity(cmds.len() + 1);
    let mut cur = Point::default();
    let mut start = Point::default();
    let mut closed = false;
    // reflected control points for S and T
    let mut last_cubic_ctrl: Option<Point> = None;
    let mut last_quad_ctrl: Option<Point> = None;

    for raw in cmds {
        let a = &raw.args;
        let rel = raw.is_relative();
        let base = if rel { cur } else { Point::default() };
        let pt = |i: usize| Point::new(base.x + a[i], base.y + a[i + 1]);
        let upper = raw.letter.to_ascii_uppercase();

        if closed && upper != 'M' && upper != 'Z' {
            out.push(AtomicCommand::M(start));
        }
        closed = false;

        let mut cubic_ctrl = None;
        let mut quad_ctrl = None;
        match upper {
            'M' => {
                let p = pt(0);
                if let Some(AtomicCommand::M(prev)) = out.last_mut() {
                    *prev = p;
                } else {
                    out.push(AtomicCommand::M(p));
                }
                cur = p;
                start = p;
            }
            'L' => {
                let p = pt(0);
                out.push(AtomicCommand::L(p));
                cur = p;
            }
            'H' => {
                let p = Point::new(if rel { cur.x + a[0] } else { a[0] }, cur.y);
                out.push(AtomicCommand::L(p));
                cur = p;
            }
            'V' => {
                let p = Point::new(cur.x, if rel { cur.y + a[0] } else { a[0] });
                out.push(AtomicCommand::L(p));
                cur = p;
            }
            'C' => {
                let (c1, c2, p) = (pt(0), pt(2), pt(4));
                out.push(AtomicCommand::C(c1, c2, p));
                cubic_ctrl = Some(c2);
                cur = p;
            }
            'S' => {
                let c1 = reflect(cur, last_cubic_ctrl);
                let (c2, p) = (pt(0), pt(2));
                out.push(AtomicCommand::C(c1, c2, p));
                cubic_ctrl = Some(c2);
                cur = p;
            }
            'Q' => {
                let (q, p) = (pt(0), pt(2));
                out.push(elevate(cur, q, p));
                quad_ctrl = Some(q);
                cur = p;
            }
            'T' => {
                let q = reflect(cur, last_quad_ctrl);
                let p = pt(0);
                out.push(elevate(cur, q, p));
                quad_ctrl = Some(q);
                cur = p;
            }
            'A' => {
                let p = pt(5);
                let arc = ArcSegment {
                    rx: a[0].abs(),
                    ry: a[1].abs(),
                    rot_deg: a[2],
                    large_arc: a[3] != 0.0,
                    sweep: a[4] != 0.0,
                    to: p,
                };
                if p != cur {
                    if arc.rx == 0.0 || arc.ry == 0.0 {
                        out.push(AtomicCommand::L(p));
                    } else {
                        let (rx, ry) = corrected_radii(cur, &arc);
                        out.push(AtomicCommand::A(ArcSegment { rx, ry, ..arc }));
                    }
                }
                cur = p;
            }
            'Z' => {
                if !matches!(out.last(), Some(AtomicCommand::Z)) {
                    out.push(AtomicCommand::Z);
                }
                cur = start;
                closed = true;
            }
            other => unreachable!("parser rejects letter {other}"),
        }
        last_cubic_ctrl = cubic_ctrl;
        last_quad_ctrl = quad_ctrl;
    }
    drop_empty_subpaths(&mut out);
    Ok(out)
}

fn reflect(cur: Point, ctrl: Option<Point>) -> Point {
    match ctrl {
        Some(c) => cur * 2.0 - c,
        None => cur,
    }
}

/// Exact degree elevation of a quadratic to a cubic.
fn elevate(p0: Point, q: Point, p: Point) -> AtomicCommand {
    let c1 = p0 + (q - p0) * (2.0 / 3.0);
    let c2 = p + (q - p) * (2.0 / 3.0);
    AtomicCommand::C(c1, c2, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_path_data;
    use AtomicCommand::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn norm(d: &str) -> Vec<AtomicCommand> {
        normalize_commands(&parse_path_data(d).unwrap()).unwrap()
    }

    #[test]
    fn relative_offsets_added() {
        assert_eq!(norm("m 10 10 l 5 0"), vec![M(p(10.0, 10.0)), L(p(15.0, 10.0))]);
    }

    #[test]
    fn quadratic_degree_elevation() {
        let got = norm("M 0 0 Q 30 60 60 0");
        assert_eq!(got.len(), 2);
        let C(c1, c2, end) = got[1] else { panic!() };
        assert!(c1.distance(p(20.0, 40.0)) < 1e-12);
        assert!(c2.distance(p(40.0, 40.0)) < 1e-12);
        assert_eq!(end, p(60.0, 0.0));

        // oracle: sample both curves
        let quad = |t: f64| {
            let mt = 1.0 - t;
            p(0.0, 0.0) * (mt * mt) + p(30.0, 60.0) * (2.0 * mt * t) + p(60.0, 0.0) * (t * t)
        };
        let cubic = |t: f64| {
            let mt = 1.0 - t;
            p(0.0, 0.0) * (mt * mt * mt) + c1 * (3.0 * mt * mt * t) + c2 * (3.0 * mt * t * t) + end * (t * t * t)
        };
        for i in 0..100 {
            let t = i as f64 / 99.0;
            assert!(quad(t).distance(cubic(t)) < 1e-9);
        }
    }

    #[test]
    fn smooth_cubic_reflection() {
        let got = norm("M 0 0 C 0 10 10 10 10 0 S 20 -10 20 0");
        assert_eq!(got[2], C(p(10.0, -10.0), p(20.0, -10.0), p(20.0, 0.0)));
    }

    #[test]
    fn smooth_without_previous_uses_current_point() {
        let got = norm("M 5 5 S 10 10 20 5");
        assert_eq!(got[1], C(p(5.0, 5.0), p(10.0, 10.0), p(20.0, 5.0)));
        let got = norm("M 5 5 L 6 6 T 10 6");
        let C(c1, _, _) = got[2] else { panic!() };
        assert!(c1.distance(p(6.0, 6.0)) < 1e-12);
    }

    #[test]
    fn smooth_quadratic_chain() {
        // T reflects the previous quadratic control, including T's own
        let got = norm("M 0 0 Q 10 10 20 0 T 40 0 T 60 0");
        let C(c1, _, _) = got[2] else { panic!() };
        // reflected control (30,-10); c1 = (20,0) + 2/3((30,-10) - (20,0))
        assert!(c1.distance(p(20.0 + 20.0 / 3.0, -20.0 / 3.0)) < 1e-12);
        let C(c1, _, _) = got[3] else { panic!() };
        assert!(c1.distance(p(40.0 + 20.0 / 3.0, 20.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn horizontal_vertical_and_relative() {
        let got = norm("M 1 2 H 10 v 5 h -3 V 0");
        assert_eq!(got, vec![M(p(1.0, 2.0)), L(p(10.0, 2.0)), L(p(10.0, 7.0)), L(p(7.0, 7.0)), L(p(7.0, 0.0))]);
    }

    #[test]
    fn arcs() {
        let got = norm("M 0 0 A 0 5 0 0 1 10 0 A 5 5 0 0 1 10 0 a 1 1 0 0 1 10 0");
        // zero radius -> line, coincident endpoint -> dropped, small radius -> corrected
        assert_eq!(got[1], L(p(10.0, 0.0)));
        assert_eq!(got.len(), 3);
        let A(arc) = got[2] else { panic!() };
        assert!((arc.rx - 5.0).abs() < 1e-12 && (arc.ry - 5.0).abs() < 1e-12);
        assert_eq!(arc.to, p(20.0, 0.0));
    }

    #[test]
    fn reopen_after_close() {
        let got = norm("M 0 0 L 10 0 L 10 10 Z l 5 5 L 0 9");
        assert_eq!(
            got,
            vec![M(p(0.0, 0.0)), L(p(10.0, 0.0)), L(p(10.0, 10.0)), Z, M(p(0.0, 0.0)), L(p(5.0, 5.0)), L(p(0.0, 9.0))]
        );
    }

    #[test]
    fn relative_move_after_close_is_from_start() {
        let got = norm("m 10 10 l 5 0 l 0 5 z m 1 1 l 2 0 l 0 2");
        assert_eq!(got[4], M(p(11.0, 11.0)));
    }

    #[test]
    fn lone_moves_removed() {
        assert_eq!(norm("M 0 0 M 5 5 L 6 6 M 9 9"), vec![M(p(5.0, 5.0)), L(p(6.0, 6.0))]);
        assert!(norm("M 1 1 Z").is_empty());
    }

    #[test]
    fn must_start_with_move() {
        let cmds = parse_path_data("L 1 1").unwrap();
        assert_eq!(normalize_commands(&cmds), Err(AtomizeError::PathStartsWithoutMove));
    }
}
