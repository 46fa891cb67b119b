// SPDX-License-Identifier: Apache-2.0

//! Text and binary token files.

use std::io::{self, Read, Write};

use super::codec::TokenSeq;
use super::vocab::CMD_FILL;
use crate::scene::FillRule;

pub const MAGIC: &[u8; 4] = b"SVGT";
pub const VERSION: u8 = 1;

fn invalid(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

/// Space-separated decimal ids, newline terminated. The fill-rule sidecar
/// is not part of the text form.
pub fn to_text(t: &TokenSeq) -> String {
    let mut s = t.ids.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

pub fn from_text(text: &str) -> io::Result<TokenSeq> {
    let ids = text
        .split_whitespace()
        .map(|f| f.parse::<u32>().map_err(|e| invalid(format!("bad token id {f:?}: {e}"))))
        .collect::<io::Result<Vec<_>>>()?;
    Ok(TokenSeq::new(ids))
}

/// `SVGT`, version, sidecar flag, u32 LE count, u32 LE ids, then one bit
/// per path (LSB first, set = evenodd) when the flag is 1.
pub fn write_binary<W: Write>(t: &TokenSeq, mut w: W) -> io::Result<()> {
    let count = u32::try_from(t.ids.len()).map_err(|_| invalid("too many tokens"))?;
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION, t.fill_rules.is_some() as u8])?;
    w.write_all(&count.to_le_bytes())?;
    for id in &t.ids {
        w.write_all(&id.to_le_bytes())?;
    }
    if let Some(rules) = &t.fill_rules {
        let mut bytes = vec![0u8; rules.len().div_ceil(8)];
        for (i, r) in rules.iter().enumerate() {
            if *r == FillRule::EvenOdd {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        w.write_all(&bytes)?;
    }
    Ok(())
}

/// The bitmap length follows from the number of FILL tokens.
pub fn read_binary<R: Read>(mut r: R) -> io::Result<TokenSeq> {
    let mut head = [0u8; 10];
    r.read_exact(&mut head)?;
    if &head[..4] != MAGIC {
        return Err(invalid("missing SVGT magic"));
    }
    if head[4] != VERSION {
        return Err(invalid(format!("unsupported token file version {}", head[4])));
    }
    let flag = head[5];
    if flag > 1 {
        return Err(invalid(format!("bad fill-rule flag {flag}")));
    }
    let count = u32::from_le_bytes(head[6..10].try_into().unwrap()) as usize;
    let mut raw = Vec::new();
    (&mut r).take(count as u64 * 4).read_to_end(&mut raw)?;
    if raw.len() != count * 4 {
        return Err(invalid(format!("expected {count} ids, file is truncated")));
    }
    let ids: Vec<u32> = raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();

    let fill_rules = if flag == 1 {
        let paths = ids.iter().filter(|&&id| id == CMD_FILL).count();
        let mut bytes = vec![0u8; paths.div_ceil(8)];
        r.read_exact(&mut bytes)?;
        Some(
            (0..paths)
                .map(|i| if bytes[i / 8] >> (i % 8) & 1 == 1 { FillRule::EvenOdd } else { FillRule::NonZero })
                .collect(),
        )
    } else {
        None
    };
    Ok(TokenSeq { ids, fill_rules })
}

/// Reads a token file in either format, telling them apart by the magic.
pub fn read_token_file(path: impl AsRef<std::path::Path>) -> io::Result<TokenSeq> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_binary(&bytes[..])
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|e| invalid(e.to_string()))?;
        from_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let t = TokenSeq::new(vec![1, 8, 43856, 3, 2026, 2]);
        let s = to_text(&t);
        assert_eq!(s, "1 8 43856 3 2026 2\n");
        assert_eq!(from_text(&s).unwrap(), t);
        assert_eq!(from_text("1\n8\t 2").unwrap().ids, vec![1, 8, 2]);
        assert!(from_text("1 x").is_err());
    }

    #[test]
    fn binary_roundtrip() {
        let mut ids = vec![1];
        for _ in 0..9 {
            ids.extend([8, 40016, 3, 16, 4, 17]);
        }
        ids.push(2);
        let mut rules = vec![FillRule::NonZero; 9];
        rules[0] = FillRule::EvenOdd;
        rules[8] = FillRule::EvenOdd;
        let t = TokenSeq { ids, fill_rules: Some(rules) };
        let mut buf = Vec::new();
        write_binary(&t, &mut buf).unwrap();
        assert_eq!(&buf[..6], b"SVGT\x01\x01");
        assert_eq!(buf.len(), 10 + 4 * t.ids.len() + 2);
        assert_eq!(buf[buf.len() - 2..], [0b0000_0001, 0b0000_0001]);
        assert_eq!(read_binary(&buf[..]).unwrap(), t);

        let plain = TokenSeq::new(vec![1, 2]);
        buf.clear();
        write_binary(&plain, &mut buf).unwrap();
        assert_eq!(buf.len(), 18);
        assert_eq!(read_binary(&buf[..]).unwrap(), plain);
    }

    #[test]
    fn binary_rejects_garbage() {
        assert!(read_binary(&b"SVGX\x01\x00\0\0\0\0"[..]).is_err());
        assert!(read_binary(&b"SVGT\x02\x00\0\0\0\0"[..]).is_err());
        assert!(read_binary(&b"SVGT\x01\x00\x02\0\0\0\x01\0\0\0"[..]).is_err());
    }
}
