use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported extension degree {0}, expected 1..=16")]
    UnsupportedDegree(u32),
    #[error("value {value:#x} is not an element of GF(2^{degree})")]
    InvalidElement { value: u32, degree: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("field mismatch: expected GF(2^{expected}), found GF(2^{found})")]
    FieldMismatch { expected: u32, found: u32 },
    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("field of order {q} is too small for {n} players (need q > n)")]
    FieldTooSmall { q: u64, n: usize },
    #[error("invalid threshold k={k} for n={n}")]
    InvalidThreshold { k: usize, n: usize },
    #[error("invalid access structure: {0}")]
    InvalidAccessStructure(String),
    #[error("player {player} out of range 1..={n}")]
    PlayerOutOfRange { player: usize, n: usize },
    #[error("player {0} appears more than once")]
    DuplicatePlayer(usize),
    #[error("no entry for player {0}")]
    UnknownPlayer(usize),
    #[error("not a forgery: {0}")]
    NotAForgery(&'static str),
    #[error("attack precondition violated: {0}")]
    AttackPrecondition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("enumeration space of {size} exceeds guard {guard}")]
    EnumerationTooLarge { size: u128, guard: u64 },
    #[error("decode error: {0}")]
    Decode(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
