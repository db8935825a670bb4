use alloc::string::String;
use core::fmt;

/// Errors raised by the geometric operations of this crate.
///
/// Emptiness and infeasibility are never errors; they are verdicts and come
/// back as ordinary values with certificates attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyPointSet,
    /// Point `index` does not have the ambient dimension.
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    /// Two points coincide (0-based indices).
    DuplicatePoint {
        first: usize,
        second: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    /// `conv(∅)` contains nothing, so a hull query needs at least one index.
    EmptyIndexSet,
    /// Combinatorial searches address points through 64-bit masks.
    TooManyPoints {
        len: usize,
        max: usize,
    },
    /// The vector is zero or is not an affine dependence of the ground set.
    NotADependence,
    /// Some basis dependence has a Radon point other than the origin.
    NotNormalized,
    /// The weighted block sum `Σ|c_i| x_i` is not zero for this block.
    BlockSumNonzero {
        block: usize,
    },
    HypothesisViolated(String),
    /// Index is used in every state of a flip path.
    IndexNeverFree {
        index: usize,
    },
    DimensionTooLarge {
        dim: usize,
        max: usize,
    },
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyPointSet => write!(f, "point set is empty"),
            Error::DimensionMismatch { index, expected, found } => {
                write!(f, "point {} has {} coordinates, expected {}", index + 1, found, expected)
            }
            Error::DuplicatePoint { first, second } => {
                write!(f, "points {} and {} coincide", first + 1, second + 1)
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {} out of range for {} points", index + 1, len)
            }
            Error::EmptyIndexSet => write!(f, "empty index set has an empty convex hull"),
            Error::TooManyPoints { len, max } => {
                write!(f, "{len} points exceed the combinatorial limit of {max}")
            }
            Error::NotADependence => write!(f, "vector is not a nonzero affine dependence"),
            Error::NotNormalized => {
                write!(f, "a basis dependence has a Radon point other than the origin")
            }
            Error::BlockSumNonzero { block } => {
                write!(f, "block {} does not contain the origin in its hull", block + 1)
            }
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::IndexNeverFree { index } => {
                write!(f, "index {} is used at every step of the path", index + 1)
            }
            Error::DimensionTooLarge { dim, max } => {
                write!(f, "dimension {dim} exceeds the supported maximum {max}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
