//! Netpbm graymaps, plain (P2) and raw (P5). Raw samples above 8 bits are
//! big-endian pairs.

use std::io::{Read, Write};

use super::GrayImage;
use crate::error::{Error, Result};

struct Header {
    binary: bool,
    cols: usize,
    rows: usize,
    maxval: u32,
    /// Offset of the first pixel byte.
    data_start: usize,
}

fn header_err(msg: impl Into<String>) -> Error {
    Error::MalformedHeader(msg.into())
}

/// Reads whitespace-separated tokens, skipping `#` comments.
struct Tokens<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.buf.len() {
            let b = self.buf[self.pos];
            if b == b'#' {
                while self.pos < self.buf.len() && self.buf[self.pos] != b'\n' && self.buf[self.pos] != b'\r' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Option<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.buf.len() && !self.buf[self.pos].is_ascii_whitespace() && self.buf[self.pos] != b'#' {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.buf[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        let tok = self.next().ok_or_else(|| header_err(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .filter(|s| s.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| header_err(format!("bad {what} {:?}", String::from_utf8_lossy(tok))))
    }
}

fn parse_header(buf: &[u8]) -> Result<Header> {
    let binary = match buf.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        Some([b'P', d]) if d.is_ascii_digit() => {
            return Err(header_err(format!("P{} is not a graymap", *d as char)))
        }
        _ => return Err(header_err("missing P2/P5 magic")),
    };
    let mut t = Tokens { buf, pos: 2 };
    if t.pos < buf.len() && !buf[t.pos].is_ascii_whitespace() && buf[t.pos] != b'#' {
        return Err(header_err("magic must be followed by whitespace"));
    }
    let cols = t.number("width")? as usize;
    let rows = t.number("height")? as usize;
    let maxval = t.number("maxval")?;
    if cols == 0 || rows == 0 {
        return Err(header_err(format!("empty image {cols}x{rows}")));
    }
    if cols.checked_mul(rows).map_or(true, |n| n > 1 << 28) {
        return Err(header_err(format!("image {cols}x{rows} is too large")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(header_err(format!("maxval {maxval} outside 1..=65535")));
    }
    // Exactly one whitespace byte separates the header from raw data.
    if binary && (t.pos >= buf.len() || !buf[t.pos].is_ascii_whitespace()) {
        return Err(header_err("no whitespace after maxval"));
    }
    let data_start = if binary { t.pos + 1 } else { t.pos };
    Ok(Header { binary, cols, rows, maxval: maxval as u32, data_start })
}

pub fn pgm_decode(buf: &[u8]) -> Result<GrayImage> {
    let h = parse_header(buf)?;
    let n = h.rows * h.cols;
    let scale = h.maxval as f64;
    // Every sample takes at least one input byte, so the header cannot force a large allocation.
    let mut samples = Vec::with_capacity(n.min(buf.len()));
    if h.binary {
        let width = if h.maxval > 255 { 2 } else { 1 };
        let data = buf.get(h.data_start..).unwrap_or(&[]);
        if data.len() < n * width {
            return Err(Error::TruncatedPixels { expected: n, got: data.len() / width });
        }
        for k in 0..n {
            let v = if width == 2 {
                u16::from_be_bytes([data[2 * k], data[2 * k + 1]]) as u32
            } else {
                data[k] as u32
            };
            samples.push(v);
        }
    } else {
        let mut t = Tokens { buf, pos: h.data_start.min(buf.len()) };
        for k in 0..n {
            let tok = match t.next() {
                Some(tok) => tok,
                None => return Err(Error::TruncatedPixels { expected: n, got: k }),
            };
            let v: u32 = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| header_err(format!("bad sample {:?}", String::from_utf8_lossy(tok))))?;
            samples.push(v);
        }
    }
    if let Some(&bad) = samples.iter().find(|&&v| v > h.maxval) {
        return Err(header_err(format!("sample {bad} exceeds maxval {}", h.maxval)));
    }
    let data = samples.into_iter().map(|v| v as f64 / scale).collect();
    GrayImage::new(h.rows, h.cols, data)
}

pub fn pgm_read(mut source: impl Read) -> Result<GrayImage> {
    let mut buf = Vec::new();
    source.read_to_end(&mut buf)?;
    pgm_decode(&buf)
}

/// Raw (P5) output with samples `round(p · maxval)`.
pub fn pgm_encode(img: &GrayImage, maxval: u16) -> Result<Vec<u8>> {
    if maxval == 0 {
        return Err(header_err("maxval must be positive"));
    }
    let mut out = format!("P5\n{} {}\n{}\n", img.cols(), img.rows(), maxval).into_bytes();
    let m = maxval as f64;
    for &p in img.data() {
        let q = (p.clamp(0.0, 1.0) * m).round() as u16;
        if maxval > 255 {
            out.extend_from_slice(&q.to_be_bytes());
        } else {
            out.push(q as u8);
        }
    }
    Ok(out)
}

/// Plain (P2) output.
pub fn pgm_encode_plain(img: &GrayImage, maxval: u16) -> Result<Vec<u8>> {
    if maxval == 0 {
        return Err(header_err("maxval must be positive"));
    }
    let mut out = format!("P2\n{} {}\n{}\n", img.cols(), img.rows(), maxval);
    let m = maxval as f64;
    for i in 0..img.rows() {
        let row: Vec<String> = (0..img.cols()).map(|j| ((img.get(i, j).clamp(0.0, 1.0) * m).round() as u16).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

pub fn pgm_write(img: &GrayImage, mut sink: impl Write, maxval: u16) -> Result<()> {
    sink.write_all(&pgm_encode(img, maxval)?)?;
    Ok(())
}
