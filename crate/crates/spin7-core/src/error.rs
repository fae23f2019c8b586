use crate::functors::Generator;

/// Errors shared across the workbench.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("letter {0} is outside 0..=7")]
    InvalidLetter(u8),
    #[error("sequence length {0} is not in 1..={max}", max = crate::basis::MAX_LEN)]
    InvalidLength(usize),
    #[error("rank {rank} is out of range for length {n} (must be < 8^{n})")]
    RankOutOfRange { n: usize, rank: u64 },
    #[error("ambient length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("integer overflow while {context}")]
    Overflow { context: &'static str },
    #[error("generator {0} has no translation-functor decomposition")]
    NoOracle(Generator),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix column {col} hit label {label} outside the target basis")]
    OutsideTargetBasis { col: usize, label: String },
    #[error("malformed relation catalog: {0}")]
    Catalog(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
