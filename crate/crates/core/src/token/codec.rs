// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use super::grammar::{advance, GrammarState};
use super::vocab::*;
use crate::atomize::{ArcSegment, AtomicCommand, AtomicPath, AtomicSvg};
use crate::geom::Point;
use crate::scene::FillRule;

/// Token ids plus the per-path fill-rule sidecar.
///
/// `fill_rules` is `None` when every path uses nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSeq {
    pub ids: Vec<u32>,
    pub fill_rules: Option<Vec<FillRule>>,
}

impl TokenSeq {
    pub fn new(ids: Vec<u32>) -> Self {
        TokenSeq { ids, fill_rules: None }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenError {
    #[error("not a valid atomic svg: {0}")]
    InvariantViolation(String),
    #[error("token {token} illegal at position {position} in state {state}")]
    Grammar { position: usize, state: GrammarState, token: u32 },
    #[error("sequence of {len} tokens ends before EOS")]
    TruncatedSequence { len: usize },
    #[error("fill-rule sidecar has {rules} entries for {paths} paths")]
    SidecarMismatch { paths: usize, rules: usize },
}

fn grid(v: f64, what: &str, max: f64) -> Result<u32, TokenError> {
    if v.fract() == 0.0 && (0.0..=max).contains(&v) {
        Ok(v as u32)
    } else {
        Err(TokenError::InvariantViolation(format!("{what} {v} is not an integer in [0,{max}]")))
    }
}

fn coord(p: Point) -> Result<u32, TokenError> {
    Ok(coord_token(grid(p.x, "coordinate", 199.0)?, grid(p.y, "coordinate", 199.0)?))
}

/// Serializes an atomic document. Colors are stored at 4 bits per channel.
pub fn encode(svg: &AtomicSvg) -> Result<TokenSeq, TokenError> {
    if svg.paths.is_empty() {
        return Err(TokenError::InvariantViolation("document has no paths".into()));
    }
    let mut ids = vec![SOS];
    for path in &svg.paths {
        ids.push(CMD_FILL);
        ids.push(color_token(path.fill));
        for cmd in &path.commands {
            match *cmd {
                AtomicCommand::M(p) => ids.extend([CMD_M, coord(p)?]),
                AtomicCommand::L(p) => ids.extend([CMD_L, coord(p)?]),
                AtomicCommand::C(a, b, p) => ids.extend([CMD_C, coord(a)?, coord(b)?, coord(p)?]),
                AtomicCommand::A(arc) => {
                    let radii = coord(Point::new(arc.rx, arc.ry))?;
                    let rot = grid(arc.rot_deg, "arc rotation", 359.0)?;
                    ids.extend([CMD_A, radii, angle_token(rot), flags_token(arc.large_arc, arc.sweep), coord(arc.to)?]);
                }
                AtomicCommand::Z => ids.push(CMD_Z),
            }
        }
    }
    ids.push(EOS);

    // structural invariants (leading M, no empty path, no Z Z) are exactly
    // what the grammar checks
    let mut state = GrammarState::ExpectSOS;
    for (position, &token) in ids.iter().enumerate() {
        state = advance(state, token).map_err(|e| {
            TokenError::InvariantViolation(format!(
                "token {} at position {position} breaks the grammar in state {}",
                e.token, e.state
            ))
        })?;
    }

    let fill_rules = svg
        .paths
        .iter()
        .any(|p| p.fill_rule == FillRule::EvenOdd)
        .then(|| svg.paths.iter().map(|p| p.fill_rule).collect());
    Ok(TokenSeq { ids, fill_rules })
}

fn cmds(paths: &mut [AtomicPath]) -> &mut Vec<AtomicCommand> {
    &mut paths.last_mut().expect("grammar opens a path first").commands
}

/// Parses a token sequence, validating it against the grammar.
///
/// PAD tokens after EOS are ignored.
pub fn decode(t: &TokenSeq) -> Result<AtomicSvg, TokenError> {
    use GrammarState as S;

    let mut paths: Vec<AtomicPath> = Vec::new();
    let mut state = S::ExpectSOS;
    let mut pts: Vec<Point> = Vec::with_capacity(3);
    let mut arc = ArcSegment { rx: 0.0, ry: 0.0, rot_deg: 0.0, large_arc: false, sweep: false, to: Point::default() };

    for (position, &token) in t.ids.iter().enumerate() {
        if state == S::Done {
            if token == PAD {
                continue;
            }
            return Err(TokenError::Grammar { position, state, token });
        }
        let next = advance(state, token).map_err(|e| TokenError::Grammar { position, state: e.state, token })?;
        match (state, next) {
            (S::ExpectColor, _) => paths.push(AtomicPath {
                fill: color_of(token).expect("color class"),
                fill_rule: FillRule::NonZero,
                commands: Vec::new(),
            }),
            (S::InSubpath, S::AfterZ) => cmds(&mut paths).push(AtomicCommand::Z),
            (S::ExpectARadii, _) => {
                let (rx, ry) = coord_of(token).expect("coord class");
                arc.rx = rx as f64;
                arc.ry = ry as f64;
            }
            (S::ExpectAAngle, _) => arc.rot_deg = angle_of(token).expect("angle class") as f64,
            (S::ExpectAFlags, _) => {
                (arc.large_arc, arc.sweep) = flags_of(token).expect("flags class");
            }
            _ => {}
        }
        if let Some((x, y)) = coord_of(token) {
            let p = Point::new(x as f64, y as f64);
            match state {
                S::ExpectMCoord => cmds(&mut paths).push(AtomicCommand::M(p)),
                S::ExpectLCoord => cmds(&mut paths).push(AtomicCommand::L(p)),
                S::ExpectCCoord1 | S::ExpectCCoord2 => pts.push(p),
                S::ExpectCCoord3 => {
                    cmds(&mut paths).push(AtomicCommand::C(pts[0], pts[1], p));
                    pts.clear();
                }
                S::ExpectACoord => cmds(&mut paths).push(AtomicCommand::A(ArcSegment { to: p, ..arc })),
                _ => {}
            }
        }
        state = next;
    }
    if state != S::Done {
        return Err(TokenError::TruncatedSequence { len: t.ids.len() });
    }

    if let Some(rules) = &t.fill_rules {
        if rules.len() != paths.len() {
            return Err(TokenError::SidecarMismatch { paths: paths.len(), rules: rules.len() });
        }
        for (p, &r) in paths.iter_mut().zip(rules) {
            p.fill_rule = r;
        }
    }
    Ok(AtomicSvg { paths })
}
