//! Cover contents, their designated bit-plane, and file I/O.

mod bits;
mod pgm;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use bits::NBitString;
pub use pgm::GraymapHeader;

use crate::error::{Error, Result};

/// On-disk container format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainerFormat {
    Raw,
    Graymap,
}

impl FromStr for ContainerFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(ContainerFormat::Raw),
            "graymap" | "pgm" => Ok(ContainerFormat::Graymap),
            other => Err(Error::config(format!("unknown container format `{other}`"))),
        }
    }
}

impl fmt::Display for ContainerFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContainerFormat::Raw => "raw",
            ContainerFormat::Graymap => "graymap",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ContainerKind {
    Raw,
    Graymap(GraymapHeader),
}

impl ContainerKind {
    pub fn format(&self) -> ContainerFormat {
        match self {
            ContainerKind::Raw => ContainerFormat::Raw,
            ContainerKind::Graymap(_) => ContainerFormat::Graymap,
        }
    }
}

/// A cover or stego content: a byte payload plus container metadata.
///
/// Contents are immutable values; plane writes return a modified copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Content {
    payload: Vec<u8>,
    kind: ContainerKind,
}

impl Content {
    pub fn raw(payload: Vec<u8>) -> Result<Self> {
        if payload.is_empty() {
            return Err(Error::structural("content payload must hold at least one byte"));
        }
        Ok(Content {
            payload,
            kind: ContainerKind::Raw,
        })
    }

    /// 8-bit graymap with a canonical `P5` header.
    pub fn graymap(width: usize, height: usize, payload: Vec<u8>) -> Result<Self> {
        Self::with_header(GraymapHeader::new(width, height), payload)
    }

    pub(crate) fn with_header(header: GraymapHeader, payload: Vec<u8>) -> Result<Self> {
        if payload.is_empty() {
            return Err(Error::structural("content payload must hold at least one byte"));
        }
        if header.pixel_count() != Some(payload.len()) {
            return Err(Error::structural(format!(
                "graymap {}x{} needs {} bytes, payload has {}",
                header.width(),
                header.height(),
                header.width().saturating_mul(header.height()),
                payload.len()
            )));
        }
        Ok(Content {
            payload,
            kind: ContainerKind::Graymap(header),
        })
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn kind(&self) -> &ContainerKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }

    /// Number of bits `M` in the payload.
    pub fn bit_len(&self) -> usize {
        8 * self.payload.len()
    }

    pub fn from_bytes(bytes: &[u8], format: ContainerFormat) -> Result<Self> {
        match format {
            ContainerFormat::Raw => Self::raw(bytes.to_vec()),
            ContainerFormat::Graymap => pgm::parse(bytes),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match &self.kind {
            ContainerKind::Raw => self.payload.clone(),
            ContainerKind::Graymap(header) => {
                let mut out = header.encoded().to_vec();
                out.extend_from_slice(&self.payload);
                out
            }
        }
    }

    pub fn read_from<R: Read>(mut reader: R, format: ContainerFormat) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes, format)
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, format: ContainerFormat) -> Result<Self> {
        Self::from_bytes(&fs::read(path)?, format)
    }

    pub fn store(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }
}

/// How the low-information plane is chosen inside a content.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionPolicy {
    /// Least significant bit of bytes `0..n`, in order.
    #[default]
    #[serde(rename = "lsb-per-byte")]
    LsbPerByte,
}

impl FromStr for PositionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lsb-per-byte" => Ok(PositionPolicy::LsbPerByte),
            other => Err(Error::config(format!("unknown position policy `{other}`"))),
        }
    }
}

impl fmt::Display for PositionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("lsb-per-byte")
    }
}

/// Ordered plane positions as `(byte_index, bit_index)`; position `t`
/// carries plane bit `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionMap {
    positions: Vec<(usize, u8)>,
}

impl PositionMap {
    pub fn new(positions: Vec<(usize, u8)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(positions.len());
        for &(byte, bit) in &positions {
            if bit > 7 {
                return Err(Error::structural(format!(
                    "bit index {bit} at byte {byte} is outside 0..=7"
                )));
            }
            if !seen.insert((byte, bit)) {
                return Err(Error::structural(format!(
                    "duplicate plane position ({byte}, {bit})"
                )));
            }
        }
        Ok(PositionMap { positions })
    }

    pub fn positions(&self) -> &[(usize, u8)] {
        &self.positions
    }

    /// Plane width `N`.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn validate_for(&self, content: &Content) -> Result<()> {
        match self.positions.iter().find(|&&(byte, _)| byte >= content.len()) {
            Some(&(byte, bit)) => Err(Error::structural(format!(
                "plane position ({byte}, {bit}) lies outside a {}-byte payload",
                content.len()
            ))),
            None => Ok(()),
        }
    }
}

pub fn designate_positions(content: &Content, n: usize, policy: PositionPolicy) -> Result<PositionMap> {
    match policy {
        PositionPolicy::LsbPerByte => {
            if n > content.len() {
                return Err(Error::Capacity {
                    requested: n,
                    capacity: content.len(),
                });
            }
            Ok(PositionMap {
                positions: (0..n).map(|t| (t, 0)).collect(),
            })
        }
    }
}

pub fn read_plane(content: &Content, pmap: &PositionMap) -> Result<NBitString> {
    pmap.validate_for(content)?;
    let mut out = NBitString::zeros(pmap.len());
    for (t, &(byte, bit)) in pmap.positions.iter().enumerate() {
        out.set(t, content.payload[byte] >> bit & 1 == 1);
    }
    Ok(out)
}

pub fn write_plane(content: &Content, pmap: &PositionMap, value: &NBitString) -> Result<Content> {
    if value.len() != pmap.len() {
        return Err(Error::structural(format!(
            "plane has {} positions but value has {} bits",
            pmap.len(),
            value.len()
        )));
    }
    pmap.validate_for(content)?;
    let mut out = content.clone();
    for (t, &(byte, bit)) in pmap.positions.iter().enumerate() {
        let mask = 1u8 << bit;
        if value.bit(t) {
            out.payload[byte] |= mask;
        } else {
            out.payload[byte] &= !mask;
        }
    }
    Ok(out)
}
