//! Portable graymap, plain (`P2`) and binary (`P5`), up to 16 bits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{normalize, quantize, Image2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    Plain,
    Binary,
}

/// Integer samples as stored in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gray {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    pub samples: Vec<u32>,
}

impl Gray {
    pub fn to_image(&self) -> Result<Image2D> {
        normalize(&self.samples, self.maxval, self.width, self.height)
    }

    pub fn from_image(img: &Image2D, maxval: u32) -> Self {
        Gray {
            width: img.width(),
            height: img.height(),
            maxval,
            samples: quantize(img, maxval),
        }
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Format(format!("missing or malformed {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("{what} out of range")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Gray> {
    let encoding = match bytes.get(..2) {
        Some(b"P2") => PgmEncoding::Plain,
        Some(b"P5") => PgmEncoding::Binary,
        _ => return Err(Error::Format("not a P2 or P5 graymap".into())),
    };
    let mut hd = Header { bytes, pos: 2 };
    let width = hd.number("width")? as usize;
    let height = hd.number("height")? as usize;
    let maxval = hd.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("empty {width}x{height} image")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let samples = match encoding {
        PgmEncoding::Plain => {
            let mut samples = Vec::with_capacity(count);
            for i in 0..count {
                samples.push(hd.number(&format!("sample {i}"))?);
            }
            samples
        }
        PgmEncoding::Binary => {
            // exactly one whitespace byte separates maxval from the raster
            match bytes.get(hd.pos) {
                Some(c) if c.is_ascii_whitespace() => hd.pos += 1,
                _ => return Err(Error::Format("missing raster after header".into())),
            }
            let data = &bytes[hd.pos..];
            let wide = maxval > 255;
            let need = if wide { 2 * count } else { count };
            if data.len() < need {
                return Err(Error::Format(format!(
                    "truncated raster: {} of {need} bytes",
                    data.len()
                )));
            }
            if wide {
                data[..need]
                    .chunks_exact(2)
                    .map(|b| u16::from_be_bytes([b[0], b[1]]) as u32)
                    .collect()
            } else {
                data[..need].iter().map(|&b| b as u32).collect()
            }
        }
    };
    if let Some(v) = samples.iter().find(|&&v| v > maxval) {
        return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
    }
    Ok(Gray {
        width,
        height,
        maxval,
        samples,
    })
}

pub fn encode_pgm(gray: &Gray, encoding: PgmEncoding) -> Result<Vec<u8>> {
    if gray.maxval == 0 || gray.maxval > 65535 {
        return Err(Error::arg(format!("maxval {} outside 1..=65535", gray.maxval)));
    }
    if gray.samples.len() != gray.width * gray.height {
        return Err(Error::arg("sample count does not match the dimensions"));
    }
    let magic = match encoding {
        PgmEncoding::Plain => "P2",
        PgmEncoding::Binary => "P5",
    };
    let mut out = format!("{magic}\n{} {}\n{}\n", gray.width, gray.height, gray.maxval).into_bytes();
    match encoding {
        PgmEncoding::Plain => {
            let mut text = String::new();
            for row in gray.samples.chunks(gray.width) {
                let line: Vec<String> = row.iter().map(u32::to_string).collect();
                let _ = writeln!(text, "{}", line.join(" "));
            }
            out.extend_from_slice(text.as_bytes());
        }
        PgmEncoding::Binary if gray.maxval > 255 => {
            for &v in &gray.samples {
                out.extend_from_slice(&(v.min(gray.maxval) as u16).to_be_bytes());
            }
        }
        PgmEncoding::Binary => out.extend(gray.samples.iter().map(|&v| v.min(gray.maxval) as u8)),
    }
    Ok(out)
}

pub fn read_pgm(path: &Path) -> Result<Gray> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn write_pgm(path: &Path, gray: &Gray, encoding: PgmEncoding) -> Result<()> {
    let bytes = encode_pgm(gray, encoding)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_gray(rng: &mut ChaCha8Rng, maxval: u32) -> Gray {
        let width = rng.random_range(1..20);
        let height = rng.random_range(1..20);
        Gray {
            width,
            height,
            maxval,
            samples: (0..width * height).map(|_| rng.random_range(0..=maxval)).collect(),
        }
    }

    #[test]
    fn minimal_binary_file() {
        let g = Gray {
            width: 1,
            height: 1,
            maxval: 255,
            samples: vec![0],
        };
        assert_eq!(encode_pgm(&g, PgmEncoding::Binary).unwrap(), b"P5\n1 1\n255\n\0");
    }

    #[test]
    fn plain_and_binary_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for maxval in [1, 255, 1000, 65535] {
            for _ in 0..20 {
                let g = random_gray(&mut rng, maxval);
                let plain = decode_pgm(&encode_pgm(&g, PgmEncoding::Plain).unwrap()).unwrap();
                let binary = decode_pgm(&encode_pgm(&g, PgmEncoding::Binary).unwrap()).unwrap();
                assert_eq!(plain, g);
                assert_eq!(binary, g);
            }
        }
    }

    #[test]
    fn sixteen_bit_is_big_endian() {
        let g = Gray {
            width: 2,
            height: 1,
            maxval: 65535,
            samples: vec![0x0102, 0xfffe],
        };
        let bytes = encode_pgm(&g, PgmEncoding::Binary).unwrap();
        assert!(bytes.ends_with(&[0x01, 0x02, 0xff, 0xfe]));
    }

    #[test]
    fn header_comments_and_errors() {
        let g = decode_pgm(b"P2\n# comment\n2 1 # trailing\n9\n3 9\n").unwrap();
        assert_eq!(g.samples, vec![3, 9]);
        assert!(matches!(decode_pgm(b"P5\n2 2\n255\n\0\0\0"), Err(Error::Format(_))));
        assert!(matches!(decode_pgm(b"P2\n2 1\n9\n3\n"), Err(Error::Format(_))));
        assert!(decode_pgm(b"P2\n1 1\n9\n10\n").is_err());
        assert!(decode_pgm(b"P6\n1 1\n255\n\0\0\0").is_err());
        assert!(decode_pgm(b"P5\n1 1\n70000\n\0\0").is_err());
        assert!(decode_pgm(b"P5\n0 1\n255\n").is_err());
    }

    #[test]
    fn paper_sizes() {
        let dir = tempfile::tempdir().unwrap();
        for n in [126usize, 512] {
            let img = Image2D::from_fn(n, n, |x, y| ((x ^ y) & 0xff) as f64 / 255.0).unwrap();
            let p = dir.path().join(format!("{n}.pgm"));
            write_pgm(&p, &Gray::from_image(&img, 255), PgmEncoding::Binary).unwrap();
            let back = read_pgm(&p).unwrap().to_image().unwrap();
            assert_eq!(back, img);
        }
    }
}
