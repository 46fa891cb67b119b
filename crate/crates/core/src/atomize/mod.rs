// SPDX-License-Identifier: Apache-2.0

//! Reduction of a [`SceneTree`] to atomic form: filled paths using only
//! absolute `M`, `L`, `C`, `A` and `Z` on a 200x200 integer grid.
//!
//! The pipeline is [`flatten`] (shapes to paths, transforms applied, groups
//! removed) then [`fit_viewbox`] then [`quantize`]. [`atomize`] runs all
//! three.

mod arc;
mod grid;
mod normalize;
mod shapes;
mod transform;

use std::fmt::{self, Write as _};

use thiserror::Error;

pub use arc::{arc_to_cubics, corrected_radii, radii_deficit, to_center, CenterArc};
pub use grid::{bounding_box, fit_transform, fit_viewbox, quantize, quantize_channel, quantize_coord};
pub use normalize::normalize_commands;
pub use shapes::{shape_to_path, CIRCLE_KAPPA};
pub use transform::apply_transform;

use crate::geom::{AffineTransform, Point};
use crate::scene::{self, FillRule, Group, Paint, SceneNode, SceneTree, ViewBox};

/// Side length of the output canvas in user units.
pub const CANVAS: f64 = 200.0;
/// Largest grid coordinate; the grid holds 200 values per axis.
pub const GRID_MAX: f64 = 199.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtomizeError {
    #[error("path data does not start with a moveto")]
    PathStartsWithoutMove,
    #[error("transform is singular")]
    SingularTransform,
    #[error("document has no drawable geometry")]
    EmptyGeometry,
    #[error(transparent)]
    Parse(#[from] scene::ParseError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcSegment {
    pub rx: f64,
    pub ry: f64,
    pub rot_deg: f64,
    pub large_arc: bool,
    pub sweep: bool,
    pub to: Point,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AtomicCommand {
    M(Point),
    L(Point),
    C(Point, Point, Point),
    A(ArcSegment),
    Z,
}

impl AtomicCommand {
    pub fn letter(&self) -> char {
        match self {
            AtomicCommand::M(_) => 'M',
            AtomicCommand::L(_) => 'L',
            AtomicCommand::C(..) => 'C',
            AtomicCommand::A(_) => 'A',
            AtomicCommand::Z => 'Z',
        }
    }

    /// Number of coordinate pairs the command carries (arc radii excluded).
    pub fn point_count(&self) -> usize {
        match self {
            AtomicCommand::M(_) | AtomicCommand::L(_) | AtomicCommand::A(_) => 1,
            AtomicCommand::C(..) => 3,
            AtomicCommand::Z => 0,
        }
    }
}

fn num(v: f64) -> f64 {
    v + 0.0
}

impl fmt::Display for AtomicCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AtomicCommand::M(p) => write!(f, "M {} {}", num(p.x), num(p.y)),
            AtomicCommand::L(p) => write!(f, "L {} {}", num(p.x), num(p.y)),
            AtomicCommand::C(a, b, p) => {
                write!(f, "C {} {} {} {} {} {}", num(a.x), num(a.y), num(b.x), num(b.y), num(p.x), num(p.y))
            }
            AtomicCommand::A(a) => write!(
                f,
                "A {} {} {} {} {} {} {}",
                num(a.rx),
                num(a.ry),
                num(a.rot_deg),
                a.large_arc as u8,
                a.sweep as u8,
                num(a.to.x),
                num(a.to.y)
            ),
            AtomicCommand::Z => f.write_str("Z"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicPath {
    pub fill: [u8; 3],
    pub fill_rule: FillRule,
    pub commands: Vec<AtomicCommand>,
}

impl AtomicPath {
    pub fn path_data(&self) -> String {
        let mut d = String::new();
        for (i, c) in self.commands.iter().enumerate() {
            if i > 0 {
                d.push(' ');
            }
            write!(d, "{c}").unwrap();
        }
        d
    }
}

/// Canonical atomic document. The viewBox is always `0 0 200 200`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AtomicSvg {
    pub paths: Vec<AtomicPath>,
}

impl AtomicSvg {
    pub fn command_count(&self) -> usize {
        self.paths.iter().map(|p| p.commands.len()).sum()
    }

    /// Minimal SVG text: one `<path>` per atomic path with absolute
    /// commands, `fill="#rrggbb"`, and `fill-rule` only when evenodd.
    pub fn to_svg_string(&self) -> String {
        let mut s = String::from("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 200 200\">\n");
        for p in &self.paths {
            let [r, g, b] = p.fill;
            write!(s, "<path d=\"{}\" fill=\"#{r:02x}{g:02x}{b:02x}\"", p.path_data()).unwrap();
            if p.fill_rule == FillRule::EvenOdd {
                s.push_str(" fill-rule=\"evenodd\"");
            }
            s.push_str("/>\n");
        }
        s.push_str("</svg>\n");
        s
    }
}

/// What simplification threw away or rewrote.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimplificationReport {
    /// One entry per dropped path or shape, with the reason.
    pub dropped: Vec<String>,
    /// Arcs replaced by cubics: non-similarity transform, or grid snapping
    /// would move the arc by more than one unit.
    pub converted_arcs: usize,
    /// Parser warnings carried over from the scene tree.
    pub warnings: Vec<String>,
}

/// Removes subpaths that have no drawing segment (a bare `M`, or `M Z`).
pub(crate) fn drop_empty_subpaths(cmds: &mut Vec<AtomicCommand>) {
    let mut out = Vec::with_capacity(cmds.len());
    let mut pending: Vec<AtomicCommand> = Vec::new();
    let mut drawn = false;
    for &c in cmds.iter() {
        match c {
            AtomicCommand::M(_) => {
                if drawn {
                    out.append(&mut pending);
                }
                pending.clear();
                pending.push(c);
                drawn = false;
            }
            AtomicCommand::Z => {
                if drawn {
                    pending.push(c);
                    out.append(&mut pending);
                }
                pending.clear();
                drawn = false;
            }
            _ => {
                pending.push(c);
                drawn = true;
            }
        }
    }
    if drawn {
        out.append(&mut pending);
    }
    *cmds = out;
}

/// Depth-first flattening of the scene into float-coordinate paths in
/// painter's order. Paths without a solid fill are dropped and reported.
pub fn flatten(tree: &SceneTree) -> Result<(Vec<AtomicPath>, SimplificationReport), AtomizeError> {
    let mut report = SimplificationReport { warnings: tree.warnings.clone(), ..Default::default() };
    let mut out = Vec::new();
    flatten_group(&tree.root, &AffineTransform::IDENTITY, &mut out, &mut report)?;
    Ok((out, report))
}

fn flatten_group(
    group: &Group,
    parent: &AffineTransform,
    out: &mut Vec<AtomicPath>,
    report: &mut SimplificationReport,
) -> Result<(), AtomizeError> {
    let ctm = parent.compose(&group.transform);
    for child in &group.children {
        let (raw, transform, paint, fill_rule, label) = match child {
            SceneNode::Group(g) => {
                flatten_group(g, &ctm, out, report)?;
                continue;
            }
            SceneNode::Shape(s) => {
                let raw = shape_to_path(&s.kind);
                if raw.is_empty() {
                    report.dropped.push(format!("<{}>: degenerate shape", s.kind.name()));
                    continue;
                }
                (raw, s.transform, &s.paint, s.fill_rule, s.kind.name())
            }
            SceneNode::Path(p) => (p.commands.clone(), p.transform, &p.paint, p.fill_rule, "path"),
        };
        let fill = match paint {
            Paint::Solid { r, g, b } => [*r, *g, *b],
            Paint::None => {
                report.dropped.push(format!("<{label}>: fill none"));
                continue;
            }
            Paint::Unsupported { description } => {
                report.dropped.push(format!("<{label}>: unsupported fill {description:?}"));
                continue;
            }
        };
        let local = normalize_commands(&raw)?;
        if local.is_empty() {
            report.dropped.push(format!("<{label}>: no geometry"));
            continue;
        }
        let full = ctm.compose(&transform);
        let commands = match apply_transform(&local, &full) {
            Ok(c) => c,
            Err(AtomizeError::SingularTransform) => {
                report.dropped.push(format!("<{label}>: singular transform"));
                continue;
            }
            Err(e) => return Err(e),
        };
        out.push(AtomicPath { fill, fill_rule, commands });
    }
    Ok(())
}

/// Source box for fitting: the document viewBox when present, otherwise the
/// tight bounding box of the flattened geometry.
pub fn source_box(tree: &SceneTree, paths: &[AtomicPath]) -> Result<ViewBox, AtomizeError> {
    match tree.viewbox {
        Some(vb) => Ok(vb),
        None => bounding_box(paths).ok_or(AtomizeError::EmptyGeometry),
    }
}

/// Flattened geometry fitted into the canvas, before quantization.
pub fn flatten_and_fit(tree: &SceneTree) -> Result<(Vec<AtomicPath>, SimplificationReport), AtomizeError> {
    let (paths, report) = flatten(tree)?;
    if paths.is_empty() {
        return Err(AtomizeError::EmptyGeometry);
    }
    let source = source_box(tree, &paths)?;
    Ok((fit_viewbox(&paths, &source)?, report))
}

pub fn atomize(tree: &SceneTree) -> Result<AtomicSvg, AtomizeError> {
    atomize_with_report(tree).map(|(svg, _)| svg)
}

pub fn atomize_with_report(tree: &SceneTree) -> Result<(AtomicSvg, SimplificationReport), AtomizeError> {
    let (fitted, mut report) = flatten_and_fit(tree)?;
    let svg = grid::quantize_with_report(&fitted, &mut report);
    if svg.paths.is_empty() {
        return Err(AtomizeError::EmptyGeometry);
    }
    Ok((svg, report))
}

/// Parses and atomizes SVG text in one step.
pub fn atomize_str(text: &str) -> Result<AtomicSvg, AtomizeError> {
    atomize(&scene::parse_svg(text)?)
}
