// SPDX-License-Identifier: Apache-2.0

//! SVG 1.1 path-data grammar.

use std::fmt;

use super::ParseError;

/// One path command with its argument group. Repeated argument groups in the
/// source are expanded into separate commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPathCommand {
    pub letter: char,
    pub args: Vec<f64>,
}

impl RawPathCommand {
    pub fn new(letter: char, args: impl Into<Vec<f64>>) -> Self {
        RawPathCommand { letter, args: args.into() }
    }

    pub fn is_relative(&self) -> bool {
        self.letter.is_ascii_lowercase()
    }
}

impl fmt::Display for RawPathCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Number of arguments per command letter, or `None` for an unknown letter.
pub fn arity(letter: char) -> Option<usize> {
    match letter.to_ascii_uppercase() {
        'M' | 'L' | 'T' => Some(2),
        'H' | 'V' => Some(1),
        'S' | 'Q' => Some(4),
        'C' => Some(6),
        'A' => Some(7),
        'Z' => Some(0),
        _ => None,
    }
}

pub fn parse_path_data(d: &str) -> Result<Vec<RawPathCommand>, ParseError> {
    let mut lx = Lexer::new(d);
    let mut out = Vec::new();
    loop {
        lx.skip_separators();
        let Some(c) = lx.peek() else { break };
        let pos = lx.pos;
        if !c.is_ascii_alphabetic() {
            return Err(ParseError::Arity { context: format!("number before any command at offset {pos}") });
        }
        lx.bump();
        let n = arity(c).ok_or(ParseError::UnknownCommandLetter { letter: c, offset: pos })?;
        if n == 0 {
            out.push(RawPathCommand::new(c, Vec::new()));
            continue;
        }
        let mut letter = c;
        let mut first = true;
        loop {
            lx.skip_separators();
            if !lx.at_number_start() {
                if first {
                    return Err(ParseError::Arity { context: format!("'{c}' at offset {pos} has no arguments") });
                }
                break;
            }
            let mut args = Vec::with_capacity(n);
            for i in 0..n {
                lx.skip_separators();
                let is_flag = letter.eq_ignore_ascii_case(&'a') && (i == 3 || i == 4);
                let v = if is_flag { lx.flag() } else { lx.number() };
                match v {
                    Some(v) => args.push(v),
                    None => {
                        return Err(ParseError::Arity {
                            context: format!("'{c}' at offset {pos} expects {n} arguments, found {}", args.len()),
                        })
                    }
                }
            }
            out.push(RawPathCommand::new(letter, args));
            first = false;
            // extra coordinate pairs after a moveto are implicit linetos
            letter = match letter {
                'M' => 'L',
                'm' => 'l',
                other => other,
            };
        }
    }
    Ok(out)
}

/// Serializes commands as `letter arg arg ...` separated by single spaces.
pub fn format_path_data(cmds: &[RawPathCommand]) -> String {
    cmds.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Tokenizer shared by path data, number lists and transform arguments.
pub(crate) struct Lexer<'a> {
    s: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Lexer<'a> {
    pub(crate) fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.s.get(self.pos).map(|&b| b as char)
    }

    pub(crate) fn bump(&mut self) {
        self.pos += 1;
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.s.len()
    }

    pub(crate) fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r' | '\x0c')) {
            self.pos += 1;
        }
    }

    pub(crate) fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r' | '\x0c' | ',')) {
            self.pos += 1;
        }
    }

    pub(crate) fn at_number_start(&self) -> bool {
        matches!(self.peek(), Some('0'..='9' | '.' | '-' | '+'))
    }

    fn flag(&mut self) -> Option<f64> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Some(0.0)
            }
            Some('1') => {
                self.pos += 1;
                Some(1.0)
            }
            _ => None,
        }
    }

    /// Reads one number: sign, digits, fraction, exponent. Returns `None`
    /// without consuming input when no number starts here.
    pub(crate) fn number(&mut self) -> Option<f64> {
        let start = self.pos;
        let mut i = self.pos;
        let s = self.s;
        if matches!(s.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let int_start = i;
        while matches!(s.get(i), Some(b'0'..=b'9')) {
            i += 1;
        }
        let mut digits = i - int_start;
        if s.get(i) == Some(&b'.') {
            let frac_start = i + 1;
            let mut j = frac_start;
            while matches!(s.get(j), Some(b'0'..=b'9')) {
                j += 1;
            }
            if j > frac_start || digits > 0 {
                digits += j - frac_start;
                i = j;
            }
        }
        if digits == 0 {
            return None;
        }
        if matches!(s.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(s.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            let exp_start = j;
            while matches!(s.get(j), Some(b'0'..=b'9')) {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).ok()?;
        let v: f64 = text.parse().ok()?;
        if !v.is_finite() {
            return None;
        }
        self.pos = i;
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmd(letter: char, args: &[f64]) -> RawPathCommand {
        RawPathCommand::new(letter, args.to_vec())
    }

    #[test]
    fn absolute_transcription() {
        let got = parse_path_data("M 80,90 L 180,90").unwrap();
        assert_eq!(got, vec![cmd('M', &[80.0, 90.0]), cmd('L', &[180.0, 90.0])]);
    }

    #[test]
    fn relative_letters_preserved() {
        let got = parse_path_data("m 10 10 l 5 0").unwrap();
        assert_eq!(got, vec![cmd('m', &[10.0, 10.0]), cmd('l', &[5.0, 0.0])]);
    }

    #[test]
    fn implicit_lineto_after_moveto() {
        let got = parse_path_data("M 0 0 10 10").unwrap();
        assert_eq!(got, vec![cmd('M', &[0.0, 0.0]), cmd('L', &[10.0, 10.0])]);
        let got = parse_path_data("m1 1 2 2z").unwrap();
        assert_eq!(got, vec![cmd('m', &[1.0, 1.0]), cmd('l', &[2.0, 2.0]), cmd('z', &[])]);
    }

    #[test]
    fn repeated_groups_expand() {
        let got = parse_path_data("L 1 2 3 4").unwrap();
        assert_eq!(got, vec![cmd('L', &[1.0, 2.0]), cmd('L', &[3.0, 4.0])]);
    }

    #[test]
    fn compact_numbers_and_exponents() {
        let got = parse_path_data("M-1.5.5L1e1-2E-1").unwrap();
        assert_eq!(got, vec![cmd('M', &[-1.5, 0.5]), cmd('L', &[10.0, -0.2])]);
    }

    #[test]
    fn arc_flags_without_separators() {
        let got = parse_path_data("M0 0A 1 1 0 01 2 3").unwrap();
        assert_eq!(got[1], cmd('A', &[1.0, 1.0, 0.0, 0.0, 1.0, 2.0, 3.0]));
        let got = parse_path_data("M0 0a5,5,30,1,0,10,10").unwrap();
        assert_eq!(got[1], cmd('a', &[5.0, 5.0, 30.0, 1.0, 0.0, 10.0, 10.0]));
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(parse_path_data("M 1"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_path_data("M 1 2 3"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_path_data("L"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_path_data("10 10"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_path_data("M0 0 A 1 1 0 2 0 3 3"), Err(ParseError::Arity { .. })));
    }

    #[test]
    fn unknown_letter() {
        assert!(matches!(parse_path_data("M 0 0 X 1 1"), Err(ParseError::UnknownCommandLetter { letter: 'X', .. })));
    }

    #[test]
    fn empty_is_empty() {
        assert!(parse_path_data("").unwrap().is_empty());
        assert!(parse_path_data("  , ").unwrap().is_empty());
    }

    #[test]
    fn every_letter_arity() {
        let d = "M0 0 m1 1 L2 2 l1 1 H3 h1 V4 v1 C1 2 3 4 5 6 c1 2 3 4 5 6 S1 2 3 4 s1 2 3 4 \
                 Q1 2 3 4 q1 2 3 4 T5 6 t1 1 A1 1 0 0 1 2 2 a1 1 0 1 0 2 2 Z z";
        let got = parse_path_data(d).unwrap();
        assert_eq!(got.len(), 20);
        for c in &got {
            assert_eq!(c.args.len(), arity(c.letter).unwrap());
        }
    }
}
