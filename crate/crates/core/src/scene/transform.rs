// SPDX-License-Identifier: Apache-2.0

use super::path_data::Lexer;
use super::ParseError;
use crate::geom::AffineTransform;

/// Parses a `transform` attribute into a single matrix. Terms compose left to
/// right, so the rightmost term is applied to coordinates first.
pub fn parse_transform(attr: &str) -> Result<AffineTransform, ParseError> {
    let mut lx = Lexer::new(attr);
    let mut acc = AffineTransform::IDENTITY;
    loop {
        lx.skip_separators();
        if lx.at_end() {
            break;
        }
        let name_start = lx.pos;
        while matches!(lx.peek(), Some(c) if c.is_ascii_alphabetic()) {
            lx.bump();
        }
        let name = &attr[name_start..lx.pos];
        if name.is_empty() {
            return Err(ParseError::UnknownTransformTerm(attr[name_start..].to_string()));
        }
        lx.skip_whitespace();
        if lx.peek() != Some('(') {
            return Err(ParseError::UnknownTransformTerm(name.to_string()));
        }
        lx.bump();
        let mut args = Vec::new();
        loop {
            lx.skip_separators();
            match lx.peek() {
                Some(')') => {
                    lx.bump();
                    break;
                }
                None => return Err(ParseError::Arity { context: format!("unterminated {name}(...)") }),
                _ => match lx.number() {
                    Some(v) => args.push(v),
                    None => return Err(ParseError::Arity { context: format!("bad argument in {name}(...)") }),
                },
            }
        }
        let term = term_matrix(name, &args)?;
        acc = acc.compose(&term);
    }
    Ok(acc)
}

fn term_matrix(name: &str, args: &[f64]) -> Result<AffineTransform, ParseError> {
    let bad =
        || ParseError::Arity { context: format!("{name} takes a different number of arguments than {}", args.len()) };
    let t = match (name, args) {
        ("matrix", &[a, b, c, d, e, f]) => AffineTransform::new(a, b, c, d, e, f),
        ("matrix", _) => return Err(bad()),
        ("translate", &[tx]) => AffineTransform::translate(tx, 0.0),
        ("translate", &[tx, ty]) => AffineTransform::translate(tx, ty),
        ("translate", _) => return Err(bad()),
        ("scale", &[s]) => AffineTransform::scale(s, s),
        ("scale", &[sx, sy]) => AffineTransform::scale(sx, sy),
        ("scale", _) => return Err(bad()),
        ("rotate", &[deg]) => AffineTransform::rotate_deg(deg),
        ("rotate", &[deg, cx, cy]) => AffineTransform::translate(cx, cy)
            .compose(&AffineTransform::rotate_deg(deg))
            .compose(&AffineTransform::translate(-cx, -cy)),
        ("rotate", _) => return Err(bad()),
        ("skewX", &[deg]) => AffineTransform::skew_x_deg(deg),
        ("skewY", &[deg]) => AffineTransform::skew_y_deg(deg),
        ("skewX" | "skewY", _) => return Err(bad()),
        _ => return Err(ParseError::UnknownTransformTerm(name.to_string())),
    };
    Ok(t)
}
