// SPDX-License-Identifier: Apache-2.0

//! Elliptical arcs: endpoint to center parameterization and cubic
//! approximation.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::ArcSegment;
use crate::geom::Point;

/// Relative radial error of one cubic spanning a quarter circle.
const QUARTER_ARC_ERROR: f64 = 2.7253e-4;
/// Target radial error of the cubic approximation, in user units.
const ARC_TOLERANCE: f64 = 0.05;

/// Center parameterization of an arc. Angles in radians, measured in the
/// ellipse's own frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CenterArc {
    pub center: Point,
    pub rx: f64,
    pub ry: f64,
    pub phi: f64,
    pub start_angle: f64,
    pub sweep_angle: f64,
}

impl CenterArc {
    pub fn point_at(&self, theta: f64) -> Point {
        let (sp, cp) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (x, y) = (self.rx * ct, self.ry * st);
        Point::new(self.center.x + cp * x - sp * y, self.center.y + sp * x + cp * y)
    }

    fn derivative_at(&self, theta: f64) -> Point {
        let (sp, cp) = self.phi.sin_cos();
        let (st, ct) = theta.sin_cos();
        let (x, y) = (-self.rx * st, self.ry * ct);
        Point::new(cp * x - sp * y, sp * x + cp * y)
    }
}

/// Endpoint midpoint expressed in the ellipse frame, `(x1', y1')`.
fn half_chord_in_frame(from: Point, to: Point, phi: f64) -> Point {
    let (sp, cp) = phi.sin_cos();
    let dx = (from.x - to.x) / 2.0;
    let dy = (from.y - to.y) / 2.0;
    Point::new(cp * dx + sp * dy, -sp * dx + cp * dy)
}

/// Ratio by which the radii fall short of spanning the endpoints. Values
/// above 1 mean no ellipse with these radii passes through both points and
/// the radii must grow by `sqrt(lambda)`.
pub fn radii_deficit(from: Point, arc: &ArcSegment) -> f64 {
    let p = half_chord_in_frame(from, arc.to, arc.rot_deg.to_radians());
    (p.x * p.x) / (arc.rx * arc.rx) + (p.y * p.y) / (arc.ry * arc.ry)
}

/// Returns the radii after the out-of-range correction: unchanged when the
/// endpoints are reachable, uniformly scaled up otherwise.
pub fn corrected_radii(from: Point, arc: &ArcSegment) -> (f64, f64) {
    let (rx, ry) = (arc.rx.abs(), arc.ry.abs());
    let lambda = radii_deficit(from, &ArcSegment { rx, ry, ..*arc });
    if lambda > 1.0 {
        let s = lambda.sqrt();
        (rx * s, ry * s)
    } else {
        (rx, ry)
    }
}

fn vector_angle(ux: f64, uy: f64, vx: f64, vy: f64) -> f64 {
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    cross.atan2(dot)
}

/// Converts the endpoint form to center form. Returns `None` for arcs that
/// render as nothing or as a straight line (coincident endpoints, a zero
/// radius).
pub fn to_center(from: Point, arc: &ArcSegment) -> Option<CenterArc> {
    if from == arc.to || arc.rx == 0.0 || arc.ry == 0.0 {
        return None;
    }
    let phi = arc.rot_deg.to_radians();
    let (rx, ry) = corrected_radii(from, arc);
    let p = half_chord_in_frame(from, arc.to, phi);

    let rx2 = rx * rx;
    let ry2 = ry * ry;
    let num = rx2 * ry2 - rx2 * p.y * p.y - ry2 * p.x * p.x;
    let den = rx2 * p.y * p.y + ry2 * p.x * p.x;
    let mut coef = (num / den).max(0.0).sqrt();
    if arc.large_arc == arc.sweep {
        coef = -coef;
    }
    let cxp = coef * rx * p.y / ry;
    let cyp = -coef * ry * p.x / rx;

    let (sp, cp) = phi.sin_cos();
    let center =
        Point::new(cp * cxp - sp * cyp + (from.x + arc.to.x) / 2.0, sp * cxp + cp * cyp + (from.y + arc.to.y) / 2.0);

    let ux = (p.x - cxp) / rx;
    let uy = (p.y - cyp) / ry;
    let vx = (-p.x - cxp) / rx;
    let vy = (-p.y - cyp) / ry;
    let start_angle = vector_angle(1.0, 0.0, ux, uy);
    let mut sweep_angle = vector_angle(ux, uy, vx, vy);
    if !arc.sweep && sweep_angle > 0.0 {
        sweep_angle -= TAU;
    } else if arc.sweep && sweep_angle < 0.0 {
        sweep_angle += TAU;
    }
    // exact half turns come out of atan2 as +PI; honor the sweep flag
    if (sweep_angle.abs() - PI).abs() < 1e-12 {
        sweep_angle = if arc.sweep { PI } else { -PI };
    }

    Some(CenterArc { center, rx, ry, phi, start_angle, sweep_angle })
}

/// Approximates an arc with cubic Béziers, one per sweep of at most 90
/// degrees (finer for very large ellipses). Each entry is
/// `[control1, control2, end]`. A zero-radius arc yields a single straight
/// cubic; coincident endpoints yield nothing.
pub fn arc_to_cubics(from: Point, arc: &ArcSegment) -> Vec<[Point; 3]> {
    if from == arc.to {
        return Vec::new();
    }
    let Some(ca) = to_center(from, arc) else {
        let a = from.lerp(arc.to, 1.0 / 3.0);
        let b = from.lerp(arc.to, 2.0 / 3.0);
        return vec![[a, b, arc.to]];
    };
    // Radial error of a quarter-turn cubic is about 2.7e-4 * radius and
    // shrinks with the sixth power of the sweep; very large ellipses (from
    // radii correction) get finer pieces to stay within tolerance.
    let quarters = ca.sweep_angle.abs() / FRAC_PI_2;
    let refine = (ca.rx.max(ca.ry) * QUARTER_ARC_ERROR / ARC_TOLERANCE).powf(1.0 / 6.0).max(1.0);
    let n = (quarters * refine - 1e-9).ceil().max(1.0) as usize;
    let step = ca.sweep_angle / n as f64;
    let alpha = 4.0 / 3.0 * (step / 4.0).tan();

    let mut out = Vec::with_capacity(n);
    let mut theta = ca.start_angle;
    let mut p0 = from;
    for i in 0..n {
        let next = theta + step;
        let p3 = if i + 1 == n { arc.to } else { ca.point_at(next) };
        let c1 = p0 + ca.derivative_at(theta) * alpha;
        let c2 = p3 - ca.derivative_at(next) * alpha;
        out.push([c1, c2, p3]);
        p0 = p3;
        theta = next;
    }
    out
}
