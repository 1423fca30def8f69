use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Fixed-length bit vector.
///
/// Bit `t` has weight `2^t` in the canonical integer value and is stored at
/// bit `t % 8` of byte `t / 8`. Unused high bits of the last byte are always
/// zero, so derived equality and hashing are bit-exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NBitString {
    len: usize,
    bytes: Vec<u8>,
}

fn byte_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

impl NBitString {
    pub fn zeros(len: usize) -> Self {
        NBitString {
            len,
            bytes: vec![0; byte_len(len)],
        }
    }

    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        if len < 64 && value >> len != 0 {
            return Err(Error::structural(format!(
                "value {value:#x} does not fit in {len} bits"
            )));
        }
        let mut bytes = value.to_le_bytes().to_vec();
        bytes.resize(byte_len(len), 0);
        Ok(NBitString { len, bytes })
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut out = NBitString::zeros(bits.len());
        for (t, &b) in bits.iter().enumerate() {
            out.set(t, b);
        }
        out
    }

    /// Wraps packed little-endian bytes. Bits past `len` must be zero.
    pub fn from_bytes(bytes: Vec<u8>, len: usize) -> Result<Self> {
        if bytes.len() != byte_len(len) {
            return Err(Error::structural(format!(
                "{len} bits need {} bytes, got {}",
                byte_len(len),
                bytes.len()
            )));
        }
        let out = NBitString { len, bytes };
        if out.padding_dirty() {
            return Err(Error::structural(format!(
                "bits beyond position {len} must be zero"
            )));
        }
        Ok(out)
    }

    /// Parses lowercase or uppercase hex in packed byte order.
    pub fn from_hex(text: &str, len: usize) -> Result<Self> {
        let bytes = hex::decode(text.trim()).map_err(|e| Error::Hex(e.to_string()))?;
        if bytes.len() != byte_len(len) {
            return Err(Error::Hex(format!(
                "expected {} hex digits for {len} bits, got {}",
                2 * byte_len(len),
                2 * bytes.len()
            )));
        }
        Self::from_bytes(bytes, len).map_err(|e| Error::Hex(e.to_string()))
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut bytes = vec![0u8; byte_len(len)];
        rng.fill(bytes.as_mut_slice());
        let mut out = NBitString { len, bytes };
        out.clear_padding();
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn bit(&self, t: usize) -> bool {
        assert!(t < self.len, "bit {t} out of range for length {}", self.len);
        self.bytes[t / 8] >> (t % 8) & 1 == 1
    }

    pub fn set(&mut self, t: usize, value: bool) {
        assert!(t < self.len, "bit {t} out of range for length {}", self.len);
        let mask = 1u8 << (t % 8);
        if value {
            self.bytes[t / 8] |= mask;
        } else {
            self.bytes[t / 8] &= !mask;
        }
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |t| self.bit(t))
    }

    /// Canonical integer value, if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.len > 64 {
            return None;
        }
        let mut buf = [0u8; 8];
        buf[..self.bytes.len()].copy_from_slice(&self.bytes);
        Some(u64::from_le_bytes(buf))
    }

    pub fn xor(&self, other: &NBitString) -> Result<NBitString> {
        if self.len != other.len {
            return Err(Error::structural(format!(
                "cannot xor {}-bit and {}-bit strings",
                self.len, other.len
            )));
        }
        let bytes = self
            .bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(NBitString {
            len: self.len,
            bytes,
        })
    }

    /// Copy of bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> NBitString {
        let mut out = NBitString::zeros(len);
        for t in 0..len {
            if start + t < self.len {
                out.set(t, self.bit(start + t));
            }
        }
        out
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }

    fn padding_dirty(&self) -> bool {
        match (self.len % 8, self.bytes.last()) {
            (0, _) | (_, None) => false,
            (used, Some(last)) => last >> used != 0,
        }
    }

    fn clear_padding(&mut self) {
        let used = self.len % 8;
        if used != 0 {
            if let Some(last) = self.bytes.last_mut() {
                *last &= (1u8 << used) - 1;
            }
        }
    }
}

impl fmt::Display for NBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for NBitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NBitString({} bits, ", self.len)?;
        for t in (0..self.len).rev() {
            f.write_str(if self.bit(t) { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_value_is_lsb_first() {
        let s = NBitString::from_bits(&[true, false, true, true]);
        assert_eq!(s.to_u64(), Some(0b1101));
        assert_eq!(s, NBitString::from_u64(0b1101, 4).unwrap());
    }

    #[test]
    fn from_u64_rejects_overflow() {
        assert!(NBitString::from_u64(16, 4).is_err());
        assert!(NBitString::from_u64(u64::MAX, 64).is_ok());
    }

    #[test]
    fn xor_requires_equal_lengths() {
        let a = NBitString::zeros(4);
        let b = NBitString::zeros(5);
        assert!(matches!(a.xor(&b), Err(Error::Structural(_))));
        let c = NBitString::from_u64(0b0110, 4).unwrap();
        let d = NBitString::from_u64(0b1010, 4).unwrap();
        assert_eq!(c.xor(&d).unwrap().to_u64(), Some(0b1100));
    }

    #[test]
    fn hex_uses_packed_byte_order() {
        let s = NBitString::from_u64(0b1011, 4).unwrap();
        assert_eq!(s.to_hex(), "0b");
        let wide = NBitString::from_u64(0x1234, 16).unwrap();
        assert_eq!(wide.to_hex(), "3412");
        assert_eq!(NBitString::from_hex("3412", 16).unwrap(), wide);
    }

    #[test]
    fn hex_rejects_dirty_padding_and_wrong_width() {
        assert!(matches!(NBitString::from_hex("1f", 4), Err(Error::Hex(_))));
        assert!(matches!(NBitString::from_hex("0b00", 4), Err(Error::Hex(_))));
        assert!(matches!(NBitString::from_hex("zz", 8), Err(Error::Hex(_))));
    }

    #[test]
    fn random_keeps_padding_clear() {
        let mut rng = rand::rng();
        for _ in 0..64 {
            let s = NBitString::random(5, &mut rng);
            assert!(s.to_u64().unwrap() < 32);
        }
    }
}
