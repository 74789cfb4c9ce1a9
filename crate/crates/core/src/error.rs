use thiserror::Error;

/// Errors raised by the CIOD-IM toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid constellation size {m} for {kind}")]
    InvalidOrder { kind: &'static str, m: usize },
    #[error("symbol energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("no known optimal rotation for {0}")]
    UnsupportedRotation(String),
    #[error("antenna count must be a power of two >= 4, got {0}")]
    InvalidAntennaCount(usize),
    #[error("combination index {index} out of range for N = {n}")]
    ComboOutOfRange { index: usize, n: usize },
    #[error("expected {expected} bits, got {got}")]
    BitLength { expected: usize, got: usize },
    #[error("power ratio alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("estimation error power must lie in [0, 1), got {0}")]
    InvalidErrorPower(f64),
    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("identical codewords have no pairwise error event")]
    IdenticalCodewords,
    #[error("codeword set of {size} members exceeds enumeration cap {cap}")]
    EnumerationCap { size: u64, cap: u64 },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
