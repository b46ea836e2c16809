use std::fmt;
use std::io::Write;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable ordered sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Bits `[start, end)` as a new bit string.
    pub fn slice(&self, start: usize, end: usize) -> Result<BitString> {
        if start > end || end > self.len() {
            return Err(Error::SliceOutOfRange {
                start,
                end,
                len: self.len(),
            });
        }
        Ok(BitString {
            bits: self.bits[start..end].to_vec(),
        })
    }

    /// Parses ASCII `'0'`/`'1'`. Whitespace is skipped so grouped
    /// renderings such as `"001 010"` are accepted.
    pub fn parse_binary(s: &str) -> Result<BitString> {
        let mut bits = Vec::with_capacity(s.len());
        for (position, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                found => return Err(Error::InvalidBit { found, position }),
            }
        }
        Ok(BitString { bits })
    }

    /// Parses hexadecimal digits, four bits per digit, most significant first.
    pub fn parse_hex(s: &str) -> Result<BitString> {
        let mut bits = Vec::with_capacity(s.len() * 4);
        for (position, c) in s.chars().enumerate() {
            if c.is_whitespace() {
                continue;
            }
            let nibble = c
                .to_digit(16)
                .ok_or(Error::InvalidBit { found: c, position })?;
            bits.extend((0..4).rev().map(|shift| nibble >> shift & 1 == 1));
        }
        Ok(BitString { bits })
    }

    /// Appends `value` as a `width`-bit big-endian field.
    pub(crate) fn push_field(&mut self, value: u32, width: u32) {
        self.bits
            .extend((0..width).rev().map(|shift| value >> shift & 1 == 1));
    }

    /// Splits the string into consecutive `width`-bit big-endian fields.
    /// Trailing bits that do not fill a field are ignored.
    pub fn fields(&self, width: u32) -> Vec<u32> {
        assert!((1..=32).contains(&width), "field width must be in 1..=32");
        self.bits
            .chunks_exact(width as usize)
            .map(|chunk| chunk.iter().fold(0u32, |acc, &b| acc << 1 | u32::from(b)))
            .collect()
    }

    pub fn complement(&self) -> BitString {
        BitString {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Reverses the bit order. For a power-of-two window this is the leaf
    /// sequence of the tree with left and right swapped at every node.
    pub fn reversed(&self) -> BitString {
        BitString {
            bits: self.bits.iter().rev().copied().collect(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Packs the bits most-significant first; the final partial byte is
    /// zero-padded. The true length must be carried separately.
    pub fn to_packed(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)))
            })
            .collect()
    }

    pub fn from_packed(bytes: &[u8], bit_len: usize) -> Result<BitString> {
        if bit_len.div_ceil(8) != bytes.len() {
            return Err(Error::BitFile(format!(
                "payload has {} bytes but bit length {} needs {}",
                bytes.len(),
                bit_len,
                bit_len.div_ceil(8)
            )));
        }
        let bits = (0..bit_len)
            .map(|i| bytes[i / 8] >> (7 - i % 8) & 1 == 1)
            .collect();
        Ok(BitString { bits })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString { bits }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString {
            bits: iter.into_iter().collect(),
        }
    }
}

impl Index<usize> for BitString {
    type Output = bool;

    fn index(&self, i: usize) -> &bool {
        &self.bits[i]
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

/// Which encoder produced a bit string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingTag {
    Bin,
    Lzw,
    RawBits,
}

impl EncodingTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EncodingTag::Bin => "bin",
            EncodingTag::Lzw => "lzw",
            EncodingTag::RawBits => "raw-bits",
        }
    }
}

impl fmt::Display for EncodingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One-line JSON header that precedes a packed bit payload.
///
/// File layout: `{"bit_length":N,"encoding":"lzw","code_width":W}\n`
/// followed by `ceil(N / 8)` bytes, most significant bit first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitFileHeader {
    pub bit_length: usize,
    pub encoding: EncodingTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code_width: Option<u32>,
}

impl BitFileHeader {
    pub fn write<W: Write>(&self, bits: &BitString, mut out: W) -> std::io::Result<()> {
        debug_assert_eq!(self.bit_length, bits.len());
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        out.write_all(&bits.to_packed())
    }

    pub fn read(data: &[u8]) -> Result<(BitFileHeader, BitString)> {
        let newline = data
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::BitFile("missing header line".into()))?;
        let header: BitFileHeader = serde_json::from_slice(&data[..newline])
            .map_err(|e| Error::BitFile(format!("bad header: {e}")))?;
        let bits = BitString::from_packed(&data[newline + 1..], header.bit_length)?;
        Ok((header, bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_lengths() {
        let b = BitString::parse_binary("0010011100101101").unwrap();
        assert_eq!(b.slice(0, 8).unwrap().to_string(), "00100111");
        assert_eq!(b.slice(8, 16).unwrap().to_string(), "00101101");
        assert!(b.slice(3, 3).unwrap().is_empty());
        assert!(matches!(b.slice(4, 17), Err(Error::SliceOutOfRange { .. })));
        assert!(b.slice(5, 4).is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!(
            BitString::parse_binary("01x"),
            Err(Error::InvalidBit {
                found: 'x',
                position: 2
            })
        );
        assert_eq!(
            BitString::parse_binary("001 010\n011").unwrap().to_string(),
            "001010011"
        );
    }

    #[test]
    fn hex_expands_nibbles() {
        assert_eq!(BitString::parse_hex("27").unwrap().to_string(), "00100111");
        assert_eq!(
            BitString::parse_hex("2 7 2d").unwrap().to_string(),
            "0010011100101101"
        );
        assert!(BitString::parse_hex("g").is_err());
    }

    #[test]
    fn packing_pads_final_byte() {
        let b = BitString::parse_binary("001010011100110101").unwrap();
        let packed = b.to_packed();
        assert_eq!(packed, vec![0b0010_1001, 0b1100_1101, 0b0100_0000]);
        assert_eq!(BitString::from_packed(&packed, 18).unwrap(), b);
        assert!(BitString::from_packed(&packed, 25).is_err());
    }

    #[test]
    fn bit_file_round_trip() {
        let bits = BitString::parse_binary("00001").unwrap();
        let header = BitFileHeader {
            bit_length: 5,
            encoding: EncodingTag::Bin,
            code_width: None,
        };
        let mut buf = Vec::new();
        header.write(&bits, &mut buf).unwrap();
        assert!(buf.starts_with(b"{\"bit_length\":5,\"encoding\":\"bin\"}\n"));
        assert_eq!(BitFileHeader::read(&buf).unwrap(), (header, bits));
        assert!(BitFileHeader::read(b"no header").is_err());
    }

    #[test]
    fn complement_and_reverse() {
        let b = BitString::parse_binary("0011010").unwrap();
        assert_eq!(b.complement().to_string(), "1100101");
        assert_eq!(b.reversed().to_string(), "0101100");
        assert_eq!(b.count_ones(), 3);
    }
}
