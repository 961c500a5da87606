//! Netpbm grey and colour maps.
//!
//! Reads P2/P5 (grey) and P3/P6 (colour) with any maxval up to 65535; colour
//! is reduced to luma `0.299 R + 0.587 G + 0.114 B`. Intensities are scaled
//! to `0..=255`. Writes binary P5 with maxval 255.

use std::path::Path;

use fastimd::GrayImage;

use crate::error::{FormatError, Result};
use crate::write::write_atomic;

/// Offset added to signed fluctuation images before encoding.
pub const FLUCTUATION_OFFSET: f64 = 128.0;

pub fn read_image(path: &Path) -> Result<GrayImage> {
    decode(&std::fs::read(path)?)
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next decimal token, `None` at end of input.
    fn token(&mut self) -> Option<std::result::Result<u32, ()>> {
        self.skip_space();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| ());
        Some(text.and_then(|t| t.parse().map_err(|_| ())))
    }

    fn field(&mut self, name: &str) -> Result<u32> {
        match self.token() {
            Some(Ok(v)) => Ok(v),
            Some(Err(())) => Err(FormatError::CorruptHeader(format!("{name} is not a number"))),
            None => Err(FormatError::CorruptHeader(format!("missing {name}"))),
        }
    }
}

pub fn decode(bytes: &[u8]) -> Result<GrayImage> {
    let (channels, binary) = match bytes.get(..2) {
        Some(b"P2") => (1, false),
        Some(b"P5") => (1, true),
        Some(b"P3") => (3, false),
        Some(b"P6") => (3, true),
        _ => return Err(FormatError::UnsupportedFormat),
    };
    let mut header = Header { bytes, pos: 2 };
    let width = header.field("width")? as usize;
    let height = header.field("height")? as usize;
    let maxval = header.field("maxval")?;
    if width == 0 || height == 0 {
        return Err(FormatError::CorruptHeader("zero image dimension".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(FormatError::CorruptHeader(format!("maxval {maxval} out of range")));
    }
    let count = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| FormatError::CorruptHeader("image too large".into()))?;

    let mut samples = Vec::with_capacity(count);
    if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        if !bytes.get(header.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(FormatError::TruncatedPixelData);
        }
        let raster = &bytes[header.pos + 1..];
        let wide = maxval > 255;
        let needed = count * if wide { 2 } else { 1 };
        if raster.len() < needed {
            return Err(FormatError::TruncatedPixelData);
        }
        if wide {
            samples.extend(
                raster[..needed]
                    .chunks_exact(2)
                    .map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))),
            );
        } else {
            samples.extend(raster[..needed].iter().map(|&b| u32::from(b)));
        }
    } else {
        for _ in 0..count {
            match header.token() {
                Some(Ok(v)) => samples.push(v),
                Some(Err(())) => return Err(FormatError::CorruptHeader("invalid sample".into())),
                None => return Err(FormatError::TruncatedPixelData),
            }
        }
    }
    if samples.iter().any(|&s| s > maxval) {
        return Err(FormatError::CorruptHeader("sample exceeds maxval".into()));
    }

    let scale = 255.0 / f64::from(maxval);
    let pixels = if channels == 1 {
        samples.iter().map(|&s| f64::from(s) * scale).collect()
    } else {
        samples
            .chunks_exact(3)
            .map(|c| (0.299 * f64::from(c[0]) + 0.587 * f64::from(c[1]) + 0.114 * f64::from(c[2])) * scale)
            .collect()
    };
    Ok(GrayImage::new(width, height, pixels)?)
}

/// Binary P5 bytes of `image + offset`, clamped to `0..=255` and rounded
/// half to even.
pub fn encode_pgm(image: &GrayImage, offset: f64) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(
        image
            .pixels()
            .iter()
            .map(|&v| (v + offset).clamp(0.0, 255.0).round_ties_even() as u8),
    );
    out
}

pub fn write_image(image: &GrayImage, path: &Path) -> Result<()> {
    Ok(write_atomic(path, &encode_pgm(image, 0.0))?)
}

/// Writes a signed image shifted so that zero maps to mid grey.
pub fn write_fluctuation_image(image: &GrayImage, path: &Path) -> Result<()> {
    Ok(write_atomic(path, &encode_pgm(image, FLUCTUATION_OFFSET))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_grey() {
        let img = decode(b"P2\n# tiny\n2 2\n255\n0 10\n20 30\n").unwrap();
        assert_eq!(img.pixels(), &[0.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn binary_colour_luma() {
        let mut bytes = b"P6 1 1 255\n".to_vec();
        bytes.extend([255, 0, 0]);
        let img = decode(&bytes).unwrap();
        assert!((img.pixels()[0] - 76.245).abs() < 1e-12);
    }

    #[test]
    fn sixteen_bit() {
        let mut bytes = b"P5 2 1 65535\n".to_vec();
        bytes.extend([0xff, 0xff, 0x00, 0x00]);
        assert_eq!(decode(&bytes).unwrap().pixels(), &[255.0, 0.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(decode(b"P1 1 1\n1"), Err(FormatError::UnsupportedFormat)));
        assert!(matches!(decode(b"P5 2 x 255\n"), Err(FormatError::CorruptHeader(_))));
        assert!(matches!(decode(b"P5 2 2 70000\n"), Err(FormatError::CorruptHeader(_))));
        assert!(matches!(
            decode(b"P5 2 2 255\n\x01\x02"),
            Err(FormatError::TruncatedPixelData)
        ));
        assert!(matches!(
            decode(b"P2 2 2 255\n1 2 3"),
            Err(FormatError::TruncatedPixelData)
        ));
    }

    #[test]
    fn encode_clamps_and_rounds() {
        let img = GrayImage::new(4, 1, vec![-300.0, 2.5, 3.5, 400.0]).unwrap();
        assert_eq!(&encode_pgm(&img, 0.0)[11..], &[0, 2, 4, 255]);
        assert_eq!(&encode_pgm(&img, FLUCTUATION_OFFSET)[11..], &[0, 130, 132, 255]);
    }

    #[test]
    fn constant_128() {
        let img = GrayImage::new(3, 2, vec![128.0; 6]).unwrap();
        assert!(encode_pgm(&img, 0.0)[11..].iter().all(|&b| b == 128));
    }
}
