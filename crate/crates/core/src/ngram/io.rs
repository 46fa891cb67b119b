// SPDX-License-Identifier: Apache-2.0

//! Model file: `SVGN`, version, order, u32 vocab size, then records of
//! `u8 context length, u32 context ids, u32 next id, u32 count` until EOF.
//! All integers little-endian; records sorted for reproducible bytes.

use std::collections::HashMap;
use std::io::{self, Read, Write};

use thiserror::Error;

use super::NgramModel;

pub const MAGIC: &[u8; 4] = b"SVGN";
pub const VERSION: u8 = 1;

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad model file: {0}")]
    Format(String),
}

pub fn write_model<W: Write>(m: &NgramModel, mut w: W) -> Result<(), ModelIoError> {
    let order = u8::try_from(m.order).map_err(|_| ModelIoError::Format("order above 255".into()))?;
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION, order])?;
    w.write_all(&m.vocab_size.to_le_bytes())?;
    let mut records: Vec<(&Vec<u32>, u32, u32)> =
        m.counts.iter().flat_map(|(ctx, t)| t.next.iter().map(move |(&n, &c)| (ctx, n, c))).collect();
    records.sort();
    let mut buf = Vec::with_capacity(records.len() * 16);
    for (ctx, next, count) in records {
        buf.push(ctx.len() as u8);
        for id in ctx {
            buf.extend_from_slice(&id.to_le_bytes());
        }
        buf.extend_from_slice(&next.to_le_bytes());
        buf.extend_from_slice(&count.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_model<R: Read>(mut r: R) -> Result<NgramModel, ModelIoError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let bad = |m: &str| ModelIoError::Format(m.to_string());
    if bytes.len() < 10 || &bytes[..4] != MAGIC {
        return Err(bad("missing SVGN header"));
    }
    if bytes[4] != VERSION {
        return Err(bad("unsupported version"));
    }
    let order = bytes[5] as usize;
    let u32_at = |i: usize| -> Result<u32, ModelIoError> {
        bytes.get(i..i + 4).map(|b| u32::from_le_bytes(b.try_into().unwrap())).ok_or_else(|| bad("truncated record"))
    };
    let vocab_size = u32_at(6)?;
    let mut m = NgramModel { order, vocab_size, counts: HashMap::new() };
    let mut pos = 10;
    while pos < bytes.len() {
        let len = bytes[pos] as usize;
        if len > order {
            return Err(bad("context longer than the model order"));
        }
        pos += 1;
        let mut ctx = Vec::with_capacity(len);
        for _ in 0..len {
            ctx.push(u32_at(pos)?);
            pos += 4;
        }
        let next = u32_at(pos)?;
        let count = u32_at(pos + 4)?;
        pos += 8;
        if next >= vocab_size || ctx.iter().any(|&id| id >= vocab_size) {
            return Err(bad("token id outside the vocabulary"));
        }
        m.add(ctx, next, count);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::token::TokenSeq;

    #[test]
    fn roundtrip_is_byte_stable() {
        let seqs = vec![TokenSeq::new(vec![1, 8, 40016, 3, 500, 4, 900, 7, 2])];
        let m = NgramModel::fit(&seqs, 3).unwrap();
        let mut a = Vec::new();
        write_model(&m, &mut a).unwrap();
        assert_eq!(&a[..6], b"SVGN\x01\x03");
        let back = read_model(&a[..]).unwrap();
        assert_eq!(back, m);
        let mut b = Vec::new();
        write_model(&back, &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_model(&b"SVGX\x01\x01\0\0\0\0"[..]).is_err());
        assert!(read_model(&b"SVGN\x01\x01\xff\xff\0\0\x01\x05"[..]).is_err());
        assert!(read_model(&b"SVGN\x01\x01\xff\xff\0\0\x02"[..]).is_err());
    }
}
