// SPDX-License-Identifier: Apache-2.0

//! Binary PPM (P6, maxval 255).

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::Raster;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a binary PPM: {0}")]
    BadMagic(String),
}

/// RGB bytes with alpha composited over white.
pub fn encode_ppm(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.reserve(3 * r.width * r.height);
    for px in r.pixels.chunks_exact(4) {
        let a = px[3] as u32;
        for &c in &px[..3] {
            out.push(((c as u32 * a + 255 * (255 - a) + 127) / 255) as u8);
        }
    }
    out
}

pub fn write_ppm(r: &Raster, path: impl AsRef<Path>) -> Result<(), RasterError> {
    fs::write(path, encode_ppm(r))?;
    Ok(())
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<Raster, RasterError> {
    decode_ppm(&fs::read(path)?)
}

/// Parses P6 with maxval 255; `#` comments are allowed in the header.
pub fn decode_ppm(bytes: &[u8]) -> Result<Raster, RasterError> {
    let bad = |m: &str| RasterError::BadMagic(m.to_string());
    if !bytes.starts_with(b"P6") {
        return Err(bad("missing P6 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        loop {
            match bytes.get(pos) {
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("truncated or malformed header"))?;
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("truncated header"));
    }
    pos += 1;
    let need = 3 * width * height;
    let data = bytes
        .get(pos..pos + need)
        .ok_or_else(|| RasterError::Io(io::Error::new(io::ErrorKind::UnexpectedEof, "truncated pixel data")))?;
    let mut pixels = Vec::with_capacity(4 * width * height);
    for rgb in data.chunks_exact(3) {
        pixels.extend_from_slice(rgb);
        pixels.push(255);
    }
    Ok(Raster { width, height, pixels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_white_pixel() {
        let r = Raster::filled(1, 1, [255; 4]);
        assert_eq!(encode_ppm(&r), b"P6\n1 1\n255\n\xff\xff\xff");
    }

    #[test]
    fn roundtrip_via_file() {
        let mut r = Raster::filled(3, 2, [10, 20, 30, 255]);
        r.pixels[4..8].copy_from_slice(&[1, 2, 3, 255]);
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("x.ppm");
        write_ppm(&r, &f).unwrap();
        assert_eq!(read_ppm(&f).unwrap(), r);
    }

    #[test]
    fn alpha_composited_on_write() {
        let r = Raster::filled(1, 1, [0, 0, 0, 0]);
        assert_eq!(&encode_ppm(&r)[11..], &[255, 255, 255]);
    }

    #[test]
    fn comments_in_header() {
        let r = decode_ppm(b"P6 # made by hand\n2 1\n255\n\x00\x00\x00\xff\xff\xff").unwrap();
        assert_eq!(r.rgb(1, 0), [255, 255, 255]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(decode_ppm(b"P3\n1 1\n255\n"), Err(RasterError::BadMagic(_))));
        assert!(matches!(decode_ppm(b"P6\n1"), Err(RasterError::BadMagic(_))));
        assert!(matches!(decode_ppm(b"P6\n1 1\n65535\n\0\0"), Err(RasterError::BadMagic(_))));
        assert!(matches!(decode_ppm(b"P6\n2 2\n255\n\0\0\0"), Err(RasterError::Io(_))));
    }
}
