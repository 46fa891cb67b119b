// SPDX-License-Identifier: Apache-2.0

//! Typed scene tree parsed from SVG 1.1 XML.
//!
//! The parser keeps groups, transforms, basic shapes, path data and solid
//! fills. Everything else (text, images, filters, gradient paint servers,
//! strokes) is recorded in [`SceneTree::warnings`] or carried as
//! [`Paint::Unsupported`] so later stages can drop it explicitly.

mod color;
mod path_data;
mod transform;

use std::collections::HashMap;

use roxmltree::Node;
use thiserror::Error;

pub use color::parse_color;
pub use path_data::{arity, format_path_data, parse_path_data, RawPathCommand};
pub use transform::parse_transform;

pub use crate::geom::AffineTransform;
use path_data::Lexer;

/// Reference extent used for percentages when the document has no viewBox.
pub const FALLBACK_EXTENT: f64 = 200.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("document root is not an <svg> element")]
    NoSvgRoot,
    #[error("arity error: {context}")]
    Arity { context: String },
    #[error("unknown path command '{letter}' at offset {offset}")]
    UnknownCommandLetter { letter: char, offset: usize },
    #[error("unknown transform term '{0}'")]
    UnknownTransformTerm(String),
    #[error("invalid value for attribute '{attr}': {value:?}")]
    InvalidAttribute { attr: String, value: String },
    #[error("cyclic <use> reference through '#{0}'")]
    CyclicReference(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FillRule {
    #[default]
    NonZero,
    EvenOdd,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Paint {
    Solid { r: u8, g: u8, b: u8 },
    None,
    Unsupported { description: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShapeKind {
    Rect {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        rx: f64,
        ry: f64,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Ellipse {
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
    },
    /// Flat `x0 y0 x1 y1 ...` list.
    Polyline {
        points: Vec<f64>,
    },
    Polygon {
        points: Vec<f64>,
    },
}

impl ShapeKind {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeKind::Rect { .. } => "rect",
            ShapeKind::Circle { .. } => "circle",
            ShapeKind::Ellipse { .. } => "ellipse",
            ShapeKind::Line { .. } => "line",
            ShapeKind::Polyline { .. } => "polyline",
            ShapeKind::Polygon { .. } => "polygon",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub transform: AffineTransform,
    pub children: Vec<SceneNode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapeNode {
    pub kind: ShapeKind,
    pub transform: AffineTransform,
    pub paint: Paint,
    pub fill_rule: FillRule,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathNode {
    pub commands: Vec<RawPathCommand>,
    pub transform: AffineTransform,
    pub paint: Paint,
    pub fill_rule: FillRule,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SceneNode {
    Group(Group),
    Shape(ShapeNode),
    Path(PathNode),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneTree {
    pub width_hint: Option<f64>,
    pub height_hint: Option<f64>,
    pub viewbox: Option<ViewBox>,
    pub root: Group,
    /// Skipped elements and ignored attributes, in document order.
    pub warnings: Vec<String>,
}

impl SceneTree {
    /// Depth-first iterator over every non-group node.
    pub fn leaves(&self) -> Vec<&SceneNode> {
        fn walk<'a>(g: &'a Group, out: &mut Vec<&'a SceneNode>) {
            for c in &g.children {
                match c {
                    SceneNode::Group(inner) => walk(inner, out),
                    leaf => out.push(leaf),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }
}

#[derive(Clone, Debug)]
struct Style {
    fill: Paint,
    fill_rule: FillRule,
    color: Paint,
}

impl Default for Style {
    fn default() -> Self {
        let black = Paint::Solid { r: 0, g: 0, b: 0 };
        Style { fill: black.clone(), fill_rule: FillRule::NonZero, color: black }
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
    Diagonal,
}

struct Ctx<'a, 'input> {
    ids: HashMap<&'a str, Node<'a, 'input>>,
    extent: (f64, f64),
    warnings: Vec<String>,
    use_stack: Vec<String>,
}

/// Parses SVG text into a [`SceneTree`].
pub fn parse_svg(text: &str) -> Result<SceneTree, ParseError> {
    let opts = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
    let doc =
        roxmltree::Document::parse_with_options(text, opts).map_err(|e| ParseError::MalformedXml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(ParseError::NoSvgRoot);
    }

    let viewbox = match root.attribute("viewBox") {
        Some(v) => Some(parse_viewbox(v)?),
        None => None,
    };
    let extent = viewbox.map(|vb| (vb.width, vb.height)).unwrap_or((FALLBACK_EXTENT, FALLBACK_EXTENT));

    let ids =
        doc.descendants().filter(|n| n.is_element()).filter_map(|n| n.attribute("id").map(|id| (id, n))).collect();
    let mut ctx = Ctx { ids, extent, warnings: Vec::new(), use_stack: Vec::new() };

    let width_hint = opt_length(&ctx, root, "width", Axis::X)?;
    let height_hint = opt_length(&ctx, root, "height", Axis::Y)?;
    let style = resolve_style(&mut ctx, root, &Style::default());
    let children = parse_children(&mut ctx, root, &style)?;

    Ok(SceneTree {
        width_hint,
        height_hint,
        viewbox,
        root: Group { transform: AffineTransform::IDENTITY, children },
        warnings: ctx.warnings,
    })
}

fn parse_viewbox(v: &str) -> Result<ViewBox, ParseError> {
    let nums = parse_number_list(v).ok_or_else(|| invalid("viewBox", v))?;
    match nums[..] {
        [min_x, min_y, width, height] if width > 0.0 && height > 0.0 => Ok(ViewBox { min_x, min_y, width, height }),
        _ => Err(invalid("viewBox", v)),
    }
}

fn invalid(attr: &str, value: &str) -> ParseError {
    ParseError::InvalidAttribute { attr: attr.to_string(), value: value.to_string() }
}

fn parse_number_list(s: &str) -> Option<Vec<f64>> {
    let mut lx = Lexer::new(s);
    let mut out = Vec::new();
    loop {
        lx.skip_separators();
        if lx.at_end() {
            return Some(out);
        }
        out.push(lx.number()?);
    }
}

/// Attribute value from `style="..."` (higher priority) or the presentation
/// attribute itself.
fn property<'a>(node: Node<'a, '_>, name: &str) -> Option<&'a str> {
    if let Some(style) = node.attribute("style") {
        for decl in style.split(';') {
            if let Some((k, v)) = decl.split_once(':') {
                if k.trim() == name {
                    return Some(v.trim());
                }
            }
        }
    }
    node.attribute(name).map(str::trim)
}

fn resolve_style(ctx: &mut Ctx, node: Node, parent: &Style) -> Style {
    let mut style = parent.clone();
    if let Some(c) = property(node, "color") {
        if c != "inherit" {
            style.color = parse_color(c);
        }
    }
    if let Some(f) = property(node, "fill") {
        style.fill = match f {
            "inherit" => parent.fill.clone(),
            v if v.eq_ignore_ascii_case("currentcolor") => style.color.clone(),
            v => parse_color(v),
        };
    }
    if let Some(r) = property(node, "fill-rule") {
        match r {
            "evenodd" => style.fill_rule = FillRule::EvenOdd,
            "nonzero" => style.fill_rule = FillRule::NonZero,
            "inherit" => {}
            other => ctx.warnings.push(format!("<{}>: unknown fill-rule {other:?}", node.tag_name().name())),
        }
    }
    if let Some(s) = property(node, "stroke") {
        if s != "none" {
            ctx.warnings.push(format!("<{}>: stroke ignored", node.tag_name().name()));
        }
    }
    for key in ["opacity", "fill-opacity"] {
        if let Some(v) = property(node, key) {
            if v.parse::<f64>().map_or(true, |o| o < 1.0) {
                ctx.warnings.push(format!("<{}>: {key}={v} ignored", node.tag_name().name()));
            }
        }
    }
    style
}

fn parse_children(ctx: &mut Ctx, node: Node, style: &Style) -> Result<Vec<SceneNode>, ParseError> {
    let mut out = Vec::new();
    for child in node.children().filter(|n| n.is_element()) {
        if let Some(n) = parse_element(ctx, child, style)? {
            out.push(n);
        }
    }
    Ok(out)
}

fn element_transform(node: Node) -> Result<AffineTransform, ParseError> {
    match node.attribute("transform") {
        Some(t) => parse_transform(t),
        None => Ok(AffineTransform::IDENTITY),
    }
}

fn parse_element(ctx: &mut Ctx, node: Node, parent: &Style) -> Result<Option<SceneNode>, ParseError> {
    let tag = node.tag_name().name();
    if property(node, "display") == Some("none") {
        ctx.warnings.push(format!("<{tag}>: display=none skipped"));
        return Ok(None);
    }
    match tag {
        "g" | "a" | "switch" | "svg" => {
            let style = resolve_style(ctx, node, parent);
            let mut transform = element_transform(node)?;
            if tag == "svg" {
                ctx.warnings.push("<svg>: nested viewport flattened without clipping".to_string());
                let x = opt_length(ctx, node, "x", Axis::X)?.unwrap_or(0.0);
                let y = opt_length(ctx, node, "y", Axis::Y)?.unwrap_or(0.0);
                transform = transform.compose(&AffineTransform::translate(x, y));
            }
            let children = parse_children(ctx, node, &style)?;
            Ok(Some(SceneNode::Group(Group { transform, children })))
        }
        "use" => parse_use(ctx, node, parent),
        "path" => {
            let style = resolve_style(ctx, node, parent);
            let Some(d) = node.attribute("d") else {
                ctx.warnings.push("<path> without d skipped".to_string());
                return Ok(None);
            };
            Ok(Some(SceneNode::Path(PathNode {
                commands: parse_path_data(d)?,
                transform: element_transform(node)?,
                paint: style.fill,
                fill_rule: style.fill_rule,
            })))
        }
        "rect" | "circle" | "ellipse" | "line" | "polyline" | "polygon" => {
            let style = resolve_style(ctx, node, parent);
            let Some(kind) = parse_shape(ctx, node)? else {
                return Ok(None);
            };
            Ok(Some(SceneNode::Shape(ShapeNode {
                kind,
                transform: element_transform(node)?,
                paint: style.fill,
                fill_rule: style.fill_rule,
            })))
        }
        // non-rendering containers and metadata
        "defs" | "symbol" | "title" | "desc" | "metadata" | "linearGradient" | "radialGradient" | "pattern"
        | "clipPath" | "mask" | "marker" => Ok(None),
        other => {
            ctx.warnings.push(format!("<{other}> element skipped"));
            Ok(None)
        }
    }
}

fn parse_use(ctx: &mut Ctx, node: Node, parent: &Style) -> Result<Option<SceneNode>, ParseError> {
    let href = node.attributes().find(|a| a.name() == "href").map(|a| a.value().trim().to_string());
    let Some(id) = href.as_deref().and_then(|h| h.strip_prefix('#')) else {
        ctx.warnings.push("<use> without local #reference skipped".to_string());
        return Ok(None);
    };
    let Some(target) = ctx.ids.get(id).copied() else {
        ctx.warnings.push(format!("<use> target #{id} not found"));
        return Ok(None);
    };
    if ctx.use_stack.iter().any(|s| s == id) {
        return Err(ParseError::CyclicReference(id.to_string()));
    }
    let style = resolve_style(ctx, node, parent);
    let x = opt_length(ctx, node, "x", Axis::X)?.unwrap_or(0.0);
    let y = opt_length(ctx, node, "y", Axis::Y)?.unwrap_or(0.0);
    let transform = element_transform(node)?.compose(&AffineTransform::translate(x, y));

    ctx.use_stack.push(id.to_string());
    let instance = if target.tag_name().name() == "symbol" {
        let inner = resolve_style(ctx, target, &style);
        parse_children(ctx, target, &inner)
            .map(|children| Some(SceneNode::Group(Group { transform: AffineTransform::IDENTITY, children })))
    } else {
        parse_element(ctx, target, &style)
    };
    ctx.use_stack.pop();

    Ok(instance?.map(|child| SceneNode::Group(Group { transform, children: vec![child] })))
}

fn parse_length(ctx: &Ctx, attr: &str, value: &str, axis: Axis) -> Result<f64, ParseError> {
    let v = value.trim();
    let mut lx = Lexer::new(v);
    let num = lx.number().ok_or_else(|| invalid(attr, value))?;
    let unit = v[lx.pos..].trim();
    let (w, h) = ctx.extent;
    let factor = match unit {
        "" | "px" => 1.0,
        "%" => {
            let reference = match axis {
                Axis::X => w,
                Axis::Y => h,
                Axis::Diagonal => ((w * w + h * h) / 2.0).sqrt(),
            };
            reference / 100.0
        }
        "pt" => 4.0 / 3.0,
        "pc" => 16.0,
        "mm" => 96.0 / 25.4,
        "cm" => 96.0 / 2.54,
        "in" => 96.0,
        "em" => 16.0,
        "ex" => 8.0,
        _ => return Err(invalid(attr, value)),
    };
    Ok(num * factor)
}

fn opt_length(ctx: &Ctx, node: Node, attr: &str, axis: Axis) -> Result<Option<f64>, ParseError> {
    match node.attribute(attr) {
        Some(v) if v.trim() == "auto" => Ok(None),
        Some(v) => parse_length(ctx, attr, v, axis).map(Some),
        None => Ok(None),
    }
}

fn parse_shape(ctx: &mut Ctx, node: Node) -> Result<Option<ShapeKind>, ParseError> {
    let len = |ctx: &Ctx, attr: &str, axis: Axis| -> Result<f64, ParseError> {
        Ok(opt_length(ctx, node, attr, axis)?.unwrap_or(0.0))
    };
    let tag = node.tag_name().name();
    let kind = match tag {
        "rect" => {
            let width = len(ctx, "width", Axis::X)?;
            let height = len(ctx, "height", Axis::Y)?;
            let rx = opt_length(ctx, node, "rx", Axis::X)?;
            let ry = opt_length(ctx, node, "ry", Axis::Y)?;
            let (rx, ry) = match (rx, ry) {
                (None, None) => (0.0, 0.0),
                (Some(r), None) | (None, Some(r)) => (r, r),
                (Some(x), Some(y)) => (x, y),
            };
            ShapeKind::Rect {
                x: len(ctx, "x", Axis::X)?,
                y: len(ctx, "y", Axis::Y)?,
                width,
                height,
                rx: rx.max(0.0).min(width.abs() / 2.0),
                ry: ry.max(0.0).min(height.abs() / 2.0),
            }
        }
        "circle" => ShapeKind::Circle {
            cx: len(ctx, "cx", Axis::X)?,
            cy: len(ctx, "cy", Axis::Y)?,
            r: len(ctx, "r", Axis::Diagonal)?,
        },
        "ellipse" => ShapeKind::Ellipse {
            cx: len(ctx, "cx", Axis::X)?,
            cy: len(ctx, "cy", Axis::Y)?,
            rx: len(ctx, "rx", Axis::X)?,
            ry: len(ctx, "ry", Axis::Y)?,
        },
        "line" => ShapeKind::Line {
            x1: len(ctx, "x1", Axis::X)?,
            y1: len(ctx, "y1", Axis::Y)?,
            x2: len(ctx, "x2", Axis::X)?,
            y2: len(ctx, "y2", Axis::Y)?,
        },
        _ => {
            let raw = node.attribute("points").unwrap_or("");
            let mut points = parse_number_list(raw).ok_or_else(|| invalid("points", raw))?;
            if points.len() % 2 == 1 {
                ctx.warnings.push(format!("<{tag}>: odd coordinate count, last value dropped"));
                points.pop();
            }
            if points.len() < 4 {
                ctx.warnings.push(format!("<{tag}>: fewer than two points, skipped"));
                return Ok(None);
            }
            if tag == "polyline" {
                ShapeKind::Polyline { points }
            } else {
                ShapeKind::Polygon { points }
            }
        }
    };
    let negative = match &kind {
        ShapeKind::Rect { width, height, .. } => *width < 0.0 || *height < 0.0,
        ShapeKind::Circle { r, .. } => *r < 0.0,
        ShapeKind::Ellipse { rx, ry, .. } => *rx < 0.0 || *ry < 0.0,
        _ => false,
    };
    if negative {
        ctx.warnings.push(format!("<{tag}>: negative size, skipped"));
        return Ok(None);
    }
    Ok(Some(kind))
}
