use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size {0} outside 1..=26")]
    AlphabetSize(usize),

    #[error("alphabet mismatch: {left} letters vs {right} letters")]
    AlphabetMismatch { left: u8, right: u8 },

    #[error("letter rank {rank} outside alphabet of size {size}")]
    LetterRank { rank: u8, size: u8 },

    #[error("parse error at index {index}: {found:?} is not a letter of the alphabet a..{last}")]
    Parse { index: usize, found: char, last: char },

    #[error("position [{start},{end}] out of range for word of length {len}")]
    Bounds { start: usize, end: usize, len: usize },

    #[error("empty pattern")]
    DegeneratePattern,

    #[error("empty factor at index {0}")]
    DegenerateFactor(usize),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} = {value} exceeds the cap of {cap}")]
    Limit {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("pattern needs at least two occurrences, found {0}")]
    InsufficientOccurrences(usize),

    #[error("subword complexity never reaches {q} on a prefix of length {len}")]
    InsufficientComplexity { q: usize, len: usize },

    #[error("prefix of length {have} too short, construction needs {need} letters")]
    PrefixTooShort { have: usize, need: usize },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("generator: {0}")]
    Generator(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
