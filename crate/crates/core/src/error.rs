use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty element list")]
    EmptySet,
    #[error("duplicate element {0}")]
    DuplicateElement(u32),
    #[error("elements not strictly ascending at {0}")]
    NotAscending(u32),
    #[error("element {elem} outside ground set [1, {ground}]")]
    OutOfRange { elem: u32, ground: u32 },
    #[error("ground size {0} unsupported (must be 1..=64)")]
    GroundTooLarge(u32),
    #[error("mismatched sets: {0}")]
    Mismatch(String),
    #[error("invalid shift pair ({i}, {j}): need i < j within the ground set")]
    BadShiftPair { i: u32, j: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no decomposition for q={q} with k={k}, s={s} (need k <= q <= sk-1)")]
    NoDecomposition { k: u32, s: u32, q: u32 },
    #[error("inconsistent bounds for {quad}: lower {lower} ({lower_source}) exceeds upper {upper} ({upper_source})")]
    InconsistentBounds {
        quad: String,
        lower: u128,
        lower_source: String,
        upper: u128,
        upper_source: String,
    },
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
