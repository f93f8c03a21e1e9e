//! Netpbm greyscale images, plain (`P2`) and raw (`P5`).

use std::path::Path;

use crate::error::{CliError, Result};

/// A decoded greyscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples, each at most `maxval`.
    pub pixels: Vec<u16>,
}

impl PgmImage {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self> {
        let here = Path::new("<image>");
        if maxval == 0 {
            return Err(CliError::parse(here, "maxval must be positive"));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(CliError::parse(
                here,
                format!(
                    "{}x{} image needs {} samples, got {}",
                    width,
                    height,
                    width * height,
                    pixels.len()
                ),
            ));
        }
        if let Some(v) = pixels.iter().find(|&&v| v > maxval) {
            return Err(CliError::parse(here, format!("sample {v} exceeds maxval {maxval}")));
        }
        Ok(PgmImage {
            width,
            height,
            maxval,
            pixels,
        })
    }

    /// Decodes either magic; `path` only labels errors.
    pub fn decode(bytes: &[u8], path: &Path) -> Result<Self> {
        let err = |m: String| CliError::parse(path, m);
        let mut cur = Cursor { bytes, pos: 0 };
        let magic = cur.token().ok_or_else(|| err("missing magic number".into()))?;
        let raw = match magic {
            b"P5" => true,
            b"P2" => false,
            other => {
                return Err(err(format!(
                    "unsupported magic {:?}, expected P2 or P5",
                    String::from_utf8_lossy(other)
                )))
            }
        };
        let mut header = [0usize; 3];
        for (slot, name) in header.iter_mut().zip(["width", "height", "maxval"]) {
            let tok = cur.token().ok_or_else(|| err(format!("header ends before {name}")))?;
            *slot = parse_uint(tok).ok_or_else(|| err(format!("bad {name} {:?}", String::from_utf8_lossy(tok))))?;
        }
        let [width, height, maxval] = header;
        if width == 0 || height == 0 {
            return Err(err("image has no pixels".into()));
        }
        if maxval == 0 || maxval > 65535 {
            return Err(err(format!("maxval {maxval} outside 1..=65535")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| err("image dimensions overflow".into()))?;
        let pixels = if raw {
            // exactly one whitespace byte separates the header from the raster
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => return Err(err("missing whitespace after maxval".into())),
            }
            let data = &bytes[cur.pos..];
            let wide = maxval > 255;
            let need = if wide { 2 * count } else { count };
            if data.len() < need {
                return Err(err(format!("raster truncated: {} of {} bytes", data.len(), need)));
            }
            if wide {
                data[..need]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect()
            } else {
                data[..need].iter().map(|&b| u16::from(b)).collect()
            }
        } else {
            let mut pixels = Vec::with_capacity(count);
            for i in 0..count {
                let tok = cur
                    .token()
                    .ok_or_else(|| err(format!("raster truncated at sample {i} of {count}")))?;
                let v = parse_uint(tok)
                    .filter(|&v| v <= 65535)
                    .ok_or_else(|| err(format!("bad sample {:?}", String::from_utf8_lossy(tok))))?;
                pixels.push(v as u16);
            }
            pixels
        };
        let maxval = maxval as u16;
        if let Some(v) = pixels.iter().find(|&&v| v > maxval) {
            return Err(err(format!("sample {v} exceeds maxval {maxval}")));
        }
        Ok(PgmImage {
            width,
            height,
            maxval,
            pixels,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| CliError::parse(path, e.to_string()))?;
        Self::decode(&bytes, path)
    }

    /// Raw `P5` encoding.
    pub fn encode_p5(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        if self.maxval > 255 {
            out.extend(self.pixels.iter().flat_map(|v| v.to_be_bytes()));
        } else {
            out.extend(self.pixels.iter().map(|&v| v as u8));
        }
        out
    }

    /// Plain `P2` encoding, 16 samples per line.
    pub fn encode_p2(&self) -> Vec<u8> {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(16) {
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.into_bytes()
    }

    /// Count histogram with `maxval + 1` bins; `negative` counts `maxval - v`.
    pub fn histogram(&self, negative: bool) -> Vec<f64> {
        let mut counts = vec![0u64; usize::from(self.maxval) + 1];
        for &v in &self.pixels {
            let v = if negative { self.maxval - v } else { v };
            counts[usize::from(v)] += 1;
        }
        counts.into_iter().map(|c| c as f64).collect()
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Next whitespace-delimited token, skipping `#` comments.
    fn token(&mut self) -> Option<&'a [u8]> {
        loop {
            match self.bytes.get(self.pos)? {
                b'#' => {
                    while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n' && b != b'\r') {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        Some(&self.bytes[start..self.pos])
    }
}

fn parse_uint(tok: &[u8]) -> Option<usize> {
    if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(tok).ok()?.parse().ok()
}
