//! Bit-level primitives for self-delimiting labels.
//!
//! All fields are written most-significant bit first and appended left to
//! right, so a label has one byte representation on every platform.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("gamma code is undefined for 0")]
    ZeroGamma,
    #[error("value {value} does not fit in {width} bits")]
    Overflow { value: u64, width: u32 },
    #[error("id set is not strictly increasing at index {index}")]
    NotSorted { index: usize },
    #[error("bit stream truncated at bit {position}")]
    Truncated { position: usize },
    #[error("malformed codeword at bit {position}")]
    Malformed { position: usize },
    #[error("bad magic; not a label file")]
    BadMagic,
}

/// Finished, immutable bit sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.bytes[i / 8] >> (7 - i % 8) & 1 == 1
    }

    /// Packed bits, zero-padded in the final byte.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<BitString, CodecError> {
        if len > bytes.len() * 8 {
            return Err(CodecError::Truncated { position: bytes.len() * 8 });
        }
        let mut bytes = bytes[..len.div_ceil(8)].to_vec();
        if !len.is_multiple_of(8) {
            let last = bytes.len() - 1;
            bytes[last] &= 0xffu8 << (8 - len % 8);
        }
        Ok(BitString { bytes, len })
    }

    pub fn cursor(&self) -> BitCursor<'_> {
        BitCursor { source: self, position: 0 }
    }

    /// Standalone byte form: γ-coded bit length, then the bits, then zero
    /// padding to a byte boundary.
    pub fn to_framed_bytes(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        w.write_gamma(self.len as u64 + 1).unwrap();
        w.append(self);
        w.finish().bytes
    }

    pub fn from_framed_bytes(bytes: &[u8]) -> Result<BitString, CodecError> {
        let outer = BitString::from_bytes(bytes, bytes.len() * 8)?;
        let mut c = outer.cursor();
        let len = c.read_gamma()? as usize - 1;
        c.read_bits(len)
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> BitWriter {
        BitWriter::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn write_bit(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 1 << (7 - self.len % 8);
        }
        self.len += 1;
    }

    /// Exactly `width` bits, big-endian.
    pub fn write_fixed(&mut self, x: u64, width: u32) -> Result<(), CodecError> {
        if width < 64 && x >> width != 0 {
            return Err(CodecError::Overflow { value: x, width });
        }
        for i in (0..width).rev() {
            self.write_bit(x >> i & 1 == 1);
        }
        Ok(())
    }

    /// Elias γ: ⌊log₂x⌋ zeros followed by the ⌊log₂x⌋+1 bits of `x`.
    pub fn write_gamma(&mut self, x: u64) -> Result<(), CodecError> {
        if x == 0 {
            return Err(CodecError::ZeroGamma);
        }
        let nbits = 63 - x.leading_zeros();
        for _ in 0..nbits {
            self.write_bit(false);
        }
        self.write_fixed(x, nbits + 1)
    }

    /// Strictly increasing ids as γ(len+1), γ(first+1), then γ of each gap.
    pub fn write_id_set(&mut self, ids: &[u32]) -> Result<(), CodecError> {
        if let Some(index) = ids.windows(2).position(|w| w[0] >= w[1]) {
            return Err(CodecError::NotSorted { index: index + 1 });
        }
        self.write_gamma(ids.len() as u64 + 1)?;
        let mut prev: Option<u32> = None;
        for &id in ids {
            match prev {
                None => self.write_gamma(id as u64 + 1)?,
                Some(p) => self.write_gamma((id - p) as u64)?,
            }
            prev = Some(id);
        }
        Ok(())
    }

    pub fn append(&mut self, bits: &BitString) {
        if self.len.is_multiple_of(8) {
            self.bytes.extend_from_slice(&bits.bytes);
            self.len += bits.len;
        } else {
            for i in 0..bits.len {
                self.write_bit(bits.get(i));
            }
        }
    }

    pub fn finish(self) -> BitString {
        BitString { bytes: self.bytes, len: self.len }
    }
}

/// Reading position over a [`BitString`].
#[derive(Debug, Clone)]
pub struct BitCursor<'a> {
    source: &'a BitString,
    position: usize,
}

impl<'a> BitCursor<'a> {
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn remaining(&self) -> usize {
        self.source.len - self.position
    }

    pub fn read_bit(&mut self) -> Result<bool, CodecError> {
        if self.position >= self.source.len {
            return Err(CodecError::Truncated { position: self.position });
        }
        let bit = self.source.get(self.position);
        self.position += 1;
        Ok(bit)
    }

    pub fn read_fixed(&mut self, width: u32) -> Result<u64, CodecError> {
        if width > 64 {
            return Err(CodecError::Malformed { position: self.position });
        }
        if self.remaining() < width as usize {
            return Err(CodecError::Truncated { position: self.source.len });
        }
        let mut x = 0u64;
        for _ in 0..width {
            x = x << 1 | self.read_bit()? as u64;
        }
        Ok(x)
    }

    pub fn read_gamma(&mut self) -> Result<u64, CodecError> {
        let start = self.position;
        let mut zeros = 0u32;
        while !self.read_bit()? {
            zeros += 1;
            if zeros > 63 {
                return Err(CodecError::Malformed { position: start });
            }
        }
        let low = self.read_fixed(zeros)?;
        Ok(1u64 << zeros | low)
    }

    pub fn read_id_set(&mut self) -> Result<Vec<u32>, CodecError> {
        let start = self.position;
        let count = self.read_gamma()? - 1;
        if count as usize > self.remaining() {
            return Err(CodecError::Malformed { position: start });
        }
        let mut ids = Vec::with_capacity(count as usize);
        let mut prev: Option<u64> = None;
        for _ in 0..count {
            let next = match prev {
                None => self.read_gamma()? - 1,
                Some(p) => p + self.read_gamma()?,
            };
            if next > u32::MAX as u64 {
                return Err(CodecError::Malformed { position: start });
            }
            ids.push(next as u32);
            prev = Some(next);
        }
        Ok(ids)
    }

    /// Reads the γ-coded value and checks it fits a `u32`.
    pub fn read_gamma_u32(&mut self) -> Result<u32, CodecError> {
        let pos = self.position;
        let x = self.read_gamma()?;
        u32::try_from(x).map_err(|_| CodecError::Malformed { position: pos })
    }

    pub fn read_bits(&mut self, len: usize) -> Result<BitString, CodecError> {
        if self.remaining() < len {
            return Err(CodecError::Truncated { position: self.source.len });
        }
        let mut w = BitWriter::new();
        for _ in 0..len {
            w.write_bit(self.read_bit()?);
        }
        Ok(w.finish())
    }
}

/// Bits needed to write any value in `0..=max`; at least 1.
pub fn width_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

pub fn gamma_len(x: u64) -> usize {
    2 * (63 - x.leading_zeros() as usize) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gamma_string(x: u64) -> String {
        let mut w = BitWriter::new();
        w.write_gamma(x).unwrap();
        w.finish().to_string()
    }

    #[test]
    fn gamma_codewords() {
        assert_eq!(gamma_string(1), "1");
        assert_eq!(gamma_string(4), "00100");
        assert_eq!(gamma_string(5), "00101");
        for x in [1u64, 4, 5] {
            let mut w = BitWriter::new();
            w.write_gamma(x).unwrap();
            let bits = w.finish();
            assert_eq!(bits.cursor().read_gamma().unwrap(), x);
        }
        assert_eq!(BitWriter::new().write_gamma(0), Err(CodecError::ZeroGamma));
    }

    #[test]
    fn gamma_extremes() {
        let mut w = BitWriter::new();
        w.write_gamma(u64::MAX).unwrap();
        let bits = w.finish();
        assert_eq!(bits.len(), 127);
        assert_eq!(bits.cursor().read_gamma().unwrap(), u64::MAX);
    }

    #[test]
    fn truncated_gamma() {
        let mut w = BitWriter::new();
        w.write_gamma(100).unwrap();
        let bits = w.finish();
        let cut = BitString::from_bytes(bits.as_bytes(), bits.len() - 2).unwrap();
        assert!(matches!(cut.cursor().read_gamma(), Err(CodecError::Truncated { .. })));
        let zeros = BitString::from_bytes(&[0, 0], 16).unwrap();
        assert!(zeros.cursor().read_gamma().is_err());
    }

    #[test]
    fn fixed_width_fields() {
        let mut w = BitWriter::new();
        w.write_fixed(5, 3).unwrap();
        w.write_fixed(0, 4).unwrap();
        assert_eq!(w.finish().to_string(), "1010000");
        assert_eq!(
            BitWriter::new().write_fixed(8, 3),
            Err(CodecError::Overflow { value: 8, width: 3 })
        );
        let mut w = BitWriter::new();
        w.write_fixed(u64::MAX, 64).unwrap();
        assert_eq!(w.finish().cursor().read_fixed(64).unwrap(), u64::MAX);
    }

    #[test]
    fn id_sets() {
        let mut w = BitWriter::new();
        w.write_id_set(&[]).unwrap();
        assert_eq!(w.finish().to_string(), "1");

        let mut w = BitWriter::new();
        w.write_id_set(&[0, 5, 6]).unwrap();
        let expected = [4u64, 1, 5, 1].map(gamma_string).concat();
        let bits = w.finish();
        assert_eq!(bits.to_string(), expected);
        assert_eq!(bits.cursor().read_id_set().unwrap(), vec![0, 5, 6]);

        assert_eq!(
            BitWriter::new().write_id_set(&[3, 3]),
            Err(CodecError::NotSorted { index: 1 })
        );
        assert_eq!(
            BitWriter::new().write_id_set(&[4, 1]),
            Err(CodecError::NotSorted { index: 1 })
        );
    }

    #[test]
    fn framed_bytes_pad_final_byte() {
        let mut w = BitWriter::new();
        w.write_fixed(0b101, 3).unwrap();
        let bits = w.finish();
        let framed = bits.to_framed_bytes();
        // γ(4) = 00100 then 101, one byte exactly
        assert_eq!(framed, vec![0b0010_0101]);
        assert_eq!(BitString::from_framed_bytes(&framed).unwrap(), bits);
    }

    #[test]
    fn append_unaligned() {
        let mut a = BitWriter::new();
        a.write_fixed(0b11, 2).unwrap();
        let mut b = BitWriter::new();
        b.write_fixed(0b1_0010_1101, 9).unwrap();
        a.append(&b.finish());
        assert_eq!(a.finish().to_string(), "11100101101");
    }

    #[test]
    fn widths() {
        assert_eq!(width_for(0), 1);
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(4), 3);
        assert_eq!(width_for(255), 8);
        assert_eq!(width_for(256), 9);
        assert_eq!(gamma_len(1), 1);
        assert_eq!(gamma_len(5), 5);
    }
}
