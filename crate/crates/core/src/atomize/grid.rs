// SPDX-License-Identifier: Apache-2.0

//! Viewbox fitting and integer-grid quantization.

use super::arc::{arc_to_cubics, radii_deficit, to_center};
use super::transform::apply_transform;
use super::{
    drop_empty_subpaths, ArcSegment, AtomicCommand, AtomicPath, AtomicSvg, AtomizeError, SimplificationReport, CANVAS,
    GRID_MAX,
};
use crate::geom::{AffineTransform, Point};
use crate::scene::ViewBox;

/// Tight box around every point of the geometry, control points included.
/// Arcs contribute the control points of their cubic approximation.
pub fn bounding_box(paths: &[AtomicPath]) -> Option<ViewBox> {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut add = |p: Point| {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    };
    for path in paths {
        let mut cur = Point::default();
        let mut start = Point::default();
        for cmd in &path.commands {
            match *cmd {
                AtomicCommand::M(p) => {
                    add(p);
                    cur = p;
                    start = p;
                }
                AtomicCommand::L(p) => {
                    add(p);
                    cur = p;
                }
                AtomicCommand::C(a, b, p) => {
                    add(a);
                    add(b);
                    add(p);
                    cur = p;
                }
                AtomicCommand::A(arc) => {
                    for [a, b, p] in arc_to_cubics(cur, &arc) {
                        add(a);
                        add(b);
                        add(p);
                    }
                    add(arc.to);
                    cur = arc.to;
                }
                AtomicCommand::Z => cur = start,
            }
        }
    }
    (min.x <= max.x).then_some(ViewBox { min_x: min.x, min_y: min.y, width: max.x - min.x, height: max.y - min.y })
}

/// The uniform scale plus centering translation that maps `source` into the
/// `[0, 200]` square.
pub fn fit_transform(source: &ViewBox) -> Result<AffineTransform, AtomizeError> {
    let extent = source.width.max(source.height);
    if extent.is_nan() || extent <= 0.0 || !extent.is_finite() {
        return Err(AtomizeError::EmptyGeometry);
    }
    let s = CANVAS / extent;
    let tx = (CANVAS - source.width * s) / 2.0 - source.min_x * s;
    let ty = (CANVAS - source.height * s) / 2.0 - source.min_y * s;
    Ok(AffineTransform::new(s, 0.0, 0.0, s, tx, ty))
}

/// Scales and centers all paths into the 200x200 canvas.
pub fn fit_viewbox(paths: &[AtomicPath], source: &ViewBox) -> Result<Vec<AtomicPath>, AtomizeError> {
    if paths.is_empty() {
        return Err(AtomizeError::EmptyGeometry);
    }
    let t = fit_transform(source)?;
    paths.iter().map(|p| Ok(AtomicPath { commands: apply_transform(&p.commands, &t)?, ..p.clone() })).collect()
}

/// Round half away from zero, then clamp into the grid.
pub fn quantize_coord(v: f64) -> f64 {
    // adding 0.0 turns -0.0 into 0.0
    v.round().clamp(0.0, GRID_MAX) + 0.0
}

fn quantize_point(p: Point) -> Point {
    Point::new(quantize_coord(p.x), quantize_coord(p.y))
}

/// Snaps a channel to the 4-bit color grid (multiples of 17).
pub fn quantize_channel(c: u8) -> u8 {
    ((c as f64 / 17.0).round() as u8).min(15) * 17
}

pub fn quantize(paths: &[AtomicPath]) -> AtomicSvg {
    quantize_with_report(paths, &mut SimplificationReport::default())
}

pub(crate) fn quantize_with_report(paths: &[AtomicPath], report: &mut SimplificationReport) -> AtomicSvg {
    let mut out = Vec::with_capacity(paths.len());
    for (index, path) in paths.iter().enumerate() {
        let commands = quantize_commands(&path.commands, report);
        if commands.is_empty() {
            report.dropped.push(format!("path {index}: no geometry left after quantization"));
            continue;
        }
        let [r, g, b] = path.fill;
        out.push(AtomicPath {
            fill: [quantize_channel(r), quantize_channel(g), quantize_channel(b)],
            fill_rule: path.fill_rule,
            commands,
        });
    }
    AtomicSvg { paths: out }
}

fn quantize_commands(cmds: &[AtomicCommand], report: &mut SimplificationReport) -> Vec<AtomicCommand> {
    let mut out = Vec::with_capacity(cmds.len());
    // float and grid positions of the pen
    let mut fcur = Point::default();
    let mut fstart = Point::default();
    let mut cur = Point::default();
    let mut start = Point::default();

    let push_cubic = |out: &mut Vec<AtomicCommand>, cur: &mut Point, c: [Point; 3]| {
        let [a, b, p] = c.map(quantize_point);
        if !(a == *cur && b == *cur && p == *cur) {
            out.push(AtomicCommand::C(a, b, p));
            *cur = p;
        }
    };

    for cmd in cmds {
        match *cmd {
            AtomicCommand::M(p) => {
                let q = quantize_point(p);
                out.push(AtomicCommand::M(q));
                cur = q;
                start = q;
                fcur = p;
                fstart = p;
            }
            AtomicCommand::L(p) => {
                let q = quantize_point(p);
                if q != cur {
                    out.push(AtomicCommand::L(q));
                    cur = q;
                }
                fcur = p;
            }
            AtomicCommand::C(a, b, p) => {
                push_cubic(&mut out, &mut cur, [a, b, p]);
                fcur = p;
            }
            AtomicCommand::A(arc) => {
                match quantize_arc(fcur, cur, &arc) {
                    ArcOnGrid::Keep(q) => {
                        out.push(AtomicCommand::A(q));
                        cur = q.to;
                    }
                    ArcOnGrid::Vanish => {}
                    ArcOnGrid::Convert => {
                        report.converted_arcs += 1;
                        for c in arc_to_cubics(fcur, &arc) {
                            push_cubic(&mut out, &mut cur, c);
                        }
                    }
                }
                fcur = arc.to;
            }
            AtomicCommand::Z => {
                out.push(AtomicCommand::Z);
                cur = start;
                fcur = fstart;
            }
        }
    }
    drop_empty_subpaths(&mut out);
    out
}

enum ArcOnGrid {
    Keep(ArcSegment),
    Vanish,
    Convert,
}

/// Largest distance between the float arc and its grid version at a few
/// fractions of the sweep.
fn arc_deviation(fcur: Point, arc: &ArcSegment, cur: Point, q: &ArcSegment) -> f64 {
    match (to_center(fcur, arc), to_center(cur, q)) {
        (Some(a), Some(b)) => [0.25, 0.5, 0.75]
            .iter()
            .map(|t| {
                a.point_at(a.start_angle + a.sweep_angle * t).distance(b.point_at(b.start_angle + b.sweep_angle * t))
            })
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    }
}

/// Grid arcs that stray more than this from the float arc become cubics.
const ARC_SNAP_LIMIT: f64 = 1.0;

fn quantize_arc(fcur: Point, cur: Point, arc: &ArcSegment) -> ArcOnGrid {
    if arc.rx.round() > GRID_MAX || arc.ry.round() > GRID_MAX {
        return ArcOnGrid::Convert;
    }
    let to = quantize_point(arc.to);
    if to == cur {
        return ArcOnGrid::Vanish;
    }
    let mut q = ArcSegment {
        rx: arc.rx.round().clamp(1.0, GRID_MAX),
        ry: arc.ry.round().clamp(1.0, GRID_MAX),
        rot_deg: arc.rot_deg.round().rem_euclid(360.0) + 0.0,
        large_arc: arc.large_arc,
        sweep: arc.sweep,
        to,
    };
    // Rounding can leave radii too small to span the grid endpoints; grow
    // them to the next integers that do so the stored arc needs no
    // correction when read back.
    let lambda = radii_deficit(cur, &q);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        q.rx = (q.rx * s).ceil();
        q.ry = (q.ry * s).ceil();
        if q.rx > GRID_MAX || q.ry > GRID_MAX || radii_deficit(cur, &q) > 1.0 {
            return ArcOnGrid::Convert;
        }
    }
    // near-half arcs flip between their two solutions under tiny radius
    // changes
    if arc_deviation(fcur, arc, cur, &q) > ARC_SNAP_LIMIT {
        return ArcOnGrid::Convert;
    }
    ArcOnGrid::Keep(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::FillRule;
    use AtomicCommand::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn path(cmds: Vec<AtomicCommand>) -> AtomicPath {
        AtomicPath { fill: [0, 0, 0], fill_rule: FillRule::NonZero, commands: cmds }
    }

    fn vb(x: f64, y: f64, w: f64, h: f64) -> ViewBox {
        ViewBox { min_x: x, min_y: y, width: w, height: h }
    }

    #[test]
    fn fit_examples() {
        assert_eq!(
            fit_transform(&vb(0.0, 0.0, 100.0, 100.0)).unwrap(),
            AffineTransform::new(2.0, 0.0, 0.0, 2.0, 0.0, 0.0)
        );
        let t = fit_transform(&vb(0.0, 0.0, 400.0, 200.0)).unwrap();
        assert_eq!(t, AffineTransform::new(0.5, 0.0, 0.0, 0.5, 0.0, 50.0));
        assert_eq!(t.apply(p(400.0, 200.0)), p(200.0, 150.0));
        let t = fit_transform(&vb(-50.0, -50.0, 100.0, 100.0)).unwrap();
        assert_eq!(t.apply(p(0.0, 0.0)), p(100.0, 100.0));
    }

    #[test]
    fn fit_errors() {
        assert_eq!(fit_viewbox(&[], &vb(0.0, 0.0, 1.0, 1.0)), Err(AtomizeError::EmptyGeometry));
        assert_eq!(fit_transform(&vb(3.0, 3.0, 0.0, 0.0)), Err(AtomizeError::EmptyGeometry));
    }

    #[test]
    fn rounding_and_clamping() {
        assert_eq!(quantize_point(p(123.4, 45.6)), p(123.0, 46.0));
        assert_eq!(quantize_point(p(199.8, -0.2)), p(199.0, 0.0));
        assert!(quantize_coord(-0.2).is_sign_positive());
        assert_eq!(quantize_coord(2.5), 3.0);
    }

    #[test]
    fn channel_snapping() {
        assert_eq!(quantize_channel(255), 255);
        assert_eq!(quantize_channel(0), 0);
        assert_eq!(quantize_channel(136), 136);
        assert_eq!(quantize_channel(130), 136);
        assert_eq!(quantize_channel(8), 0);
        assert_eq!(quantize_channel(9), 17);
    }

    #[test]
    fn degenerate_segments_removed() {
        let got = quantize(&[path(vec![
            M(p(10.2, 10.2)),
            L(p(10.4, 9.8)),
            L(p(20.0, 10.0)),
            M(p(50.0, 50.0)),
            L(p(50.3, 50.1)),
            Z,
        ])]);
        assert_eq!(got.paths[0].commands, vec![M(p(10.0, 10.0)), L(p(20.0, 10.0))]);

        let gone = quantize(&[path(vec![M(p(1.0, 1.0)), L(p(1.2, 1.2)), Z])]);
        assert!(gone.paths.is_empty());
    }

    #[test]
    fn oversized_arc_becomes_cubics() {
        let arc = ArcSegment { rx: 350.0, ry: 350.0, rot_deg: 0.0, large_arc: false, sweep: true, to: p(190.0, 10.0) };
        let mut report = SimplificationReport::default();
        let got = quantize_with_report(&[path(vec![M(p(10.0, 10.0)), A(arc)])], &mut report);
        assert_eq!(report.converted_arcs, 1);
        assert!(got.paths[0].commands.iter().all(|c| !matches!(c, A(_))));
        assert!(matches!(got.paths[0].commands.last(), Some(C(_, _, e)) if *e == p(190.0, 10.0)));
    }

    #[test]
    fn quantized_arcs_span_their_endpoints() {
        let arc = ArcSegment { rx: 15.3, ry: 14.8, rot_deg: 359.7, large_arc: false, sweep: true, to: p(30.6, 10.0) };
        let got = quantize(&[path(vec![M(p(10.0, 10.0)), A(arc)])]);
        let A(q) = got.paths[0].commands[1] else { panic!() };
        assert_eq!(q.rot_deg, 0.0);
        assert!(q.rx.fract() == 0.0 && q.ry.fract() == 0.0);
        assert!(radii_deficit(p(10.0, 10.0), &q) <= 1.0);
    }

    #[test]
    fn near_half_arcs_become_cubics() {
        // radius exactly half the chord: snapping the radius moves the
        // arc's bulge by several units, so it is converted instead
        let arc = ArcSegment { rx: 10.3, ry: 10.3, rot_deg: 0.0, large_arc: false, sweep: true, to: p(30.6, 10.0) };
        let mut report = SimplificationReport::default();
        let got = quantize_with_report(&[path(vec![M(p(10.0, 10.0)), A(arc)])], &mut report);
        assert_eq!(report.converted_arcs, 1);
        assert!(matches!(got.paths[0].commands.last(), Some(C(_, _, e)) if *e == p(31.0, 10.0)));
    }
}
