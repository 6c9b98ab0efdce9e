use alloc::string::String;
use core::fmt;

/// Errors shared by all engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An interval constructor was given `lo > hi`.
    MalformedInterval { lo: String, hi: String },
    /// `gaps` was asked for the complement inside an interval that does not
    /// contain the set.
    NotContained,
    /// An affine image with ratio zero was requested.
    ZeroRatio,
    /// A series description failed to parse or violated a constraint
    /// (ratio outside (0,1), non-positive coefficient, ...).
    InvalidSeries(String),
    /// A parameter is outside its documented domain (`m < 1`, `epsilon <= 0`, ...).
    InvalidParameter(String),
    /// An enumeration would exceed the configured budget; callers should
    /// reduce the depth or raise the budget.
    BudgetExceeded { budget: usize, needed: usize },
    /// Two pieces of a decomposition that must be disjoint intersect.
    /// Carries a point contained in both pieces.
    DisjointnessViolation {
        piece_a: String,
        piece_b: String,
        witness: String,
    },
    /// A root bracket had no sign change (malformed ratio family).
    NoSignChange,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedInterval { lo, hi } => {
                write!(f, "malformed interval: lo {lo} > hi {hi}")
            }
            Error::NotContained => write!(f, "interval does not contain the set"),
            Error::ZeroRatio => write!(f, "affine ratio must be nonzero"),
            Error::InvalidSeries(msg) => write!(f, "invalid series: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::BudgetExceeded { budget, needed } => {
                write!(f, "budget exceeded: needed {needed} items, budget {budget}")
            }
            Error::DisjointnessViolation {
                piece_a,
                piece_b,
                witness,
            } => write!(
                f,
                "decomposition pieces are not disjoint: {piece_a} and {piece_b} share {witness}"
            ),
            Error::NoSignChange => write!(f, "no sign change in initial bracket"),
        }
    }
}

impl core::error::Error for Error {}
