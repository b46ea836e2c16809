//! Text normalization and the two text-to-bits encoders.
//!
//! `BIN` writes each symbol's 1-based alphabet index (`a = 1`, ...,
//! `z = 26`, space `= 27`) as a fixed 5-bit big-endian field. `LZW` emits
//! dictionary indices which [`indices_to_bits`] packs at one fixed width,
//! sized by the largest index emitted.

mod bits;
mod lzw;

use std::fmt;
use std::ops::Deref;

pub use bits::{BitFileHeader, BitString, EncodingTag};
pub use lzw::{decode_lzw, encode_lzw, Alphabet, LzwDictionary};

use crate::error::{Error, Result};

/// Width of one `BIN` field; 27 symbols need 5 bits.
pub const BIN_FIELD_WIDTH: u32 = 5;

/// Text over `a..z` and space, with single interior spaces and no leading
/// or trailing space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct NormalizedText(String);

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for NormalizedText {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Folds case, drops everything outside `a..z` and whitespace, collapses
/// whitespace runs to one space and trims the ends.
///
/// Punctuation is removed before whitespace is collapsed, so `"a , b"`
/// becomes `"a b"`.
pub fn preprocess_text(raw: &str) -> NormalizedText {
    let mut out = String::with_capacity(raw.len());
    let mut pending_space = false;
    for c in raw.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_lowercase() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else if c.is_whitespace() {
            pending_space = true;
        }
    }
    NormalizedText(out)
}

/// Fixed-width `BIN` encoding over the normalized 27-symbol alphabet.
pub fn encode_bin(text: &str) -> Result<BitString> {
    pack_fields(
        &symbol_indices(text, &Alphabet::normalized())?,
        BIN_FIELD_WIDTH,
    )
}

/// Smallest `w` with `2^w > max_index`.
pub fn code_width(max_index: u32) -> u32 {
    u32::BITS - max_index.leading_zeros()
}

/// Writes every index at the single width [`code_width`] of the largest
/// one. An empty sequence gives an empty bit string.
pub fn indices_to_bits(indices: &[u32]) -> Result<BitString> {
    pack_fields(
        indices,
        code_width(indices.iter().copied().max().unwrap_or(0)).max(1),
    )
}

/// Writes every index as a big-endian field of exactly `width` bits.
/// Zero indices are rejected, as are indices that do not fit.
pub fn pack_fields(indices: &[u32], width: u32) -> Result<BitString> {
    if !(1..=32).contains(&width) {
        return Err(Error::InvalidParams("field width must be in 1..=32"));
    }
    let mut bits = BitString::new();
    for (position, &value) in indices.iter().enumerate() {
        if value == 0 {
            return Err(Error::ZeroIndex { position });
        }
        if code_width(value) > width {
            return Err(Error::FieldOverflow {
                value,
                width,
                position,
            });
        }
        bits.push_field(value, width);
    }
    Ok(bits)
}

/// Normalized-alphabet indices of `text`, one per symbol.
pub fn symbol_indices(text: &str, alphabet: &Alphabet) -> Result<Vec<u32>> {
    text.chars()
        .enumerate()
        .map(|(position, c)| {
            alphabet.index_of(c).ok_or(Error::InvalidSymbol {
                symbol: c,
                position,
            })
        })
        .collect()
}

/// LZW over the normalized alphabet followed by [`indices_to_bits`].
/// Returns the bits and the code width used.
pub fn encode_lzw_bits(text: &str, alphabet: &Alphabet) -> Result<(BitString, u32)> {
    let (indices, _) = encode_lzw(text, alphabet)?;
    let width = code_width(indices.iter().copied().max().unwrap_or(0));
    Ok((indices_to_bits(&indices)?, width))
}
