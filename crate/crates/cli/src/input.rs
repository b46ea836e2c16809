use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use lsys_complexity::encoding::{code_width, BIN_FIELD_WIDTH};
use lsys_complexity::{
    encode_lzw, pack_fields, preprocess_text, symbol_indices, Alphabet, BitFileHeader, BitString,
    EncodingTag,
};

use crate::EncodingArgs;

/// Reads a file, or standard input for `-`.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?;
        return Ok(buf);
    }
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read_bytes(path)?)
        .with_context(|| format!("{} is not valid UTF-8", path.display()))
}

/// Either a packed bit file (first byte `{`) or ASCII `0`/`1` with
/// optional whitespace.
pub fn parse_bit_input(data: &[u8]) -> Result<BitString> {
    if data.first() == Some(&b'{') {
        let (_, bits) = BitFileHeader::read(data)?;
        return Ok(bits);
    }
    let text =
        std::str::from_utf8(data).context("raw bit input is neither a bit file nor ASCII")?;
    Ok(BitString::parse_binary(text)?)
}

pub struct Encoded {
    pub bits: BitString,
    pub header: BitFileHeader,
}

/// Normalizes `text` and encodes it with `BIN` or `LZW`.
pub fn encode_text(text: &str, tag: EncodingTag, args: &EncodingArgs) -> Result<Encoded> {
    let normalized = preprocess_text(text);
    let alphabet = match &args.alphabet {
        Some(symbols) => Alphabet::new(symbols.chars())?,
        None => Alphabet::normalized(),
    };
    let (bits, width) = match tag {
        EncodingTag::Bin => {
            let width = args.bin_width.unwrap_or(BIN_FIELD_WIDTH);
            let indices = symbol_indices(&normalized, &alphabet)?;
            (pack_fields(&indices, width)?, width)
        }
        EncodingTag::Lzw => {
            let (indices, _) = encode_lzw(&normalized, &alphabet)?;
            let natural = code_width(indices.iter().copied().max().unwrap_or(0)).max(1);
            let width = match args.code_width {
                Some(w) if w < natural => bail!(
                    "--code-width {w} is too narrow; the largest LZW index needs {natural} bits"
                ),
                Some(w) => w,
                None => natural,
            };
            (pack_fields(&indices, width)?, width)
        }
        EncodingTag::RawBits => bail!("raw-bits input is not text; nothing to encode"),
    };
    let header = BitFileHeader {
        bit_length: bits.len(),
        encoding: tag,
        code_width: Some(width),
    };
    Ok(Encoded { bits, header })
}

/// Turns an input file into a bit stream according to `tag`.
pub fn load_stream(path: &Path, tag: EncodingTag, args: &EncodingArgs) -> Result<BitString> {
    match tag {
        EncodingTag::RawBits => parse_bit_input(&read_bytes(path)?),
        _ => Ok(encode_text(&read_text(path)?, tag, args)?.bits),
    }
}

/// One window given inline (`--bits`, `--hex`) or as a raw-bits file.
pub fn load_window(
    bits: Option<&str>,
    hex: Option<&str>,
    input: Option<&Path>,
) -> Result<BitString> {
    match (bits, hex, input) {
        (Some(b), None, None) => Ok(BitString::parse_binary(b)?),
        (None, Some(h), None) => Ok(BitString::parse_hex(h)?),
        (None, None, Some(path)) => parse_bit_input(&read_bytes(path)?),
        (None, None, None) => bail!("give a window with --bits, --hex or an input file"),
        _ => bail!("give exactly one of --bits, --hex or an input file"),
    }
}
