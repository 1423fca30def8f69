//! Binary `P5` graymaps with maxval 255.
//!
//! Comment lines are not supported; a `#` anywhere in the header is a parse
//! error. The header bytes are kept verbatim so that storing a loaded file
//! reproduces it exactly.

use super::Content;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraymapHeader {
    width: usize,
    height: usize,
    encoded: Vec<u8>,
}

impl GraymapHeader {
    pub fn new(width: usize, height: usize) -> Self {
        GraymapHeader {
            width,
            height,
            encoded: format!("P5\n{width} {height}\n255\n").into_bytes(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn maxval(&self) -> u16 {
        255
    }

    pub(crate) fn pixel_count(&self) -> Option<usize> {
        self.width.checked_mul(self.height)
    }

    pub fn encoded(&self) -> &[u8] {
        &self.encoded
    }
}

fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space(&mut self) -> Result<()> {
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                return Err(Error::parse(self.pos, "comment lines are not supported"));
            }
            if !is_space(b) {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(self.pos, "expected whitespace"));
        }
        Ok(())
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(usize::from(b - b'0')))
                .ok_or_else(|| Error::parse(start, format!("{what} overflows")))?;
            self.pos += 1;
        }
        if self.pos == start {
            let reason = match self.bytes.get(self.pos) {
                Some(b'#') => "comment lines are not supported".to_string(),
                Some(_) => format!("expected decimal {what}"),
                None => format!("header truncated before {what}"),
            };
            return Err(Error::parse(self.pos, reason));
        }
        Ok(value)
    }
}

pub(super) fn parse(bytes: &[u8]) -> Result<Content> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::parse(0, "missing P5 magic"));
    }
    let mut cur = Cursor { bytes, pos: 2 };
    cur.skip_space()?;
    let width = cur.number("width")?;
    cur.skip_space()?;
    let height = cur.number("height")?;
    cur.skip_space()?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::parse(
            maxval_at,
            format!("unsupported maxval {maxval}, only 255 is accepted"),
        ));
    }
    match bytes.get(cur.pos) {
        Some(&b) if is_space(b) => cur.pos += 1,
        Some(_) => return Err(Error::parse(cur.pos, "expected whitespace after maxval")),
        None => return Err(Error::parse(cur.pos, "header truncated after maxval")),
    }
    if width == 0 || height == 0 {
        return Err(Error::parse(2, format!("empty graymap {width}x{height}")));
    }

    let header_len = cur.pos;
    let pixels = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(2, "graymap dimensions overflow"))?;
    let data = &bytes[header_len..];
    if data.len() < pixels {
        return Err(Error::parse(
            bytes.len(),
            format!("truncated payload: expected {pixels} bytes, found {}", data.len()),
        ));
    }
    if data.len() > pixels {
        return Err(Error::parse(header_len + pixels, "trailing bytes after payload"));
    }

    let header = GraymapHeader {
        width,
        height,
        encoded: bytes[..header_len].to_vec(),
    };
    Content::with_header(header, data.to_vec())
}
