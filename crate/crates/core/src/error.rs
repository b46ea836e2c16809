use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid symbol {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },

    #[error("corrupt LZW stream: index {index} is undefined at position {position}")]
    CorruptStream { index: u32, position: usize },

    #[error("LZW indices must be >= 1, found 0 at position {position}")]
    ZeroIndex { position: usize },

    #[error("value {value} at position {position} does not fit in {width} bits")]
    FieldOverflow {
        value: u32,
        width: u32,
        position: usize,
    },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(&'static str),

    #[error("invalid bit character {found:?} at position {position}")]
    InvalidBit { found: char, position: usize },

    #[error("slice [{start}, {end}) is out of range for a bit string of length {len}")]
    SliceOutOfRange {
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("window length {len} is not a power of two >= 2")]
    InvalidWindow { len: usize },

    #[error("malformed bracketed string at offset {offset}: {reason}")]
    MalformedBracket { offset: usize, reason: &'static str },

    #[error("z = {z} lies outside [0, 1]")]
    ZOutOfRange { z: f64 },

    #[error("invalid convergence parameters: {0}")]
    InvalidParams(&'static str),

    #[error("sequence is empty")]
    EmptySequence,

    #[error("substring length {l} is outside 1..={len}")]
    LengthOutOfRange { l: usize, len: usize },

    #[error("sequence of length {len} is too short for alphabet size {k}")]
    SequenceTooShort { len: usize, k: usize },

    #[error("alphabet size must be >= 2, got {0}")]
    AlphabetTooSmall(usize),

    #[error("invalid window plan: {0}")]
    InvalidPlan(&'static str),

    #[error("series is empty")]
    EmptySeries,

    #[error("anomaly threshold must be positive, got {0}")]
    InvalidThreshold(f64),

    #[error("malformed bit file: {0}")]
    BitFile(String),
}
