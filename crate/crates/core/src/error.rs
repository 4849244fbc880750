use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("negative element {0}")]
    NegativeElement(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero belongs to no block")]
    ZeroHasNoBlock,

    #[error("integer overflow in {op}")]
    Overflow { op: &'static str },

    #[error("representation count overflow at n = {n}")]
    CountOverflow { n: u64 },

    #[error("window empty: n0 = {n0} exceeds exactness bound {bound}")]
    WindowEmpty { n0: u64, bound: u64 },

    #[error("prefix too short for threshold n0 = {n0}")]
    PrefixTooShort { n0: u64 },

    #[error("set is empty")]
    EmptySet,

    #[error("block A_{k} is empty")]
    EmptyBlock { k: u32 },

    #[error("{n} lies outside the exactness window (bound {bound})")]
    OutsideWindow { n: u64, bound: u64 },

    #[error("no non-diagonal representation of {target} with top element in block {next_block} (block k = {k})")]
    NoWitness {
        k: u32,
        target: u64,
        next_block: u32,
    },

    #[error("invalid witness for block {k}: {reason}")]
    InvalidWitness { k: u32, reason: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("construction log is not certified")]
    Uncertified,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn checked_mul(a: u64, b: u64, op: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow { op })
}
