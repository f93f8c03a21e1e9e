use core::fmt;

/// Errors raised by validation and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two inputs have different bin counts (or vector lengths).
    DimensionMismatch {
        /// Length of the first operand.
        left: usize,
        /// Length of the second operand.
        right: usize,
    },
    /// A density or parameter vector with no entries.
    Empty,
    /// A bin is negative, NaN or infinite.
    InvalidBin {
        /// Offending index.
        index: usize,
        /// Offending value.
        value: f64,
    },
    /// Probability bins do not sum to one within the construction tolerance.
    NotNormalized {
        /// Observed sum.
        sum: f64,
    },
    /// A positive density with zero (or non-finite) total mass.
    ZeroMass,
    /// A skew, weight or mixing parameter outside its admissible range.
    InvalidParameter(&'static str),
    /// The skew profile has ᾱ ∈ {0, 1}, so the vector-skew divergence is undefined.
    DegenerateProfile {
        /// The weighted mean skew ᾱ.
        alpha_bar: f64,
    },
    /// A natural parameter outside the open simplex.
    NotInterior,
    /// Fewer points than requested clusters.
    TooFewPoints {
        /// Number of points supplied.
        points: usize,
        /// Requested cluster count.
        k: usize,
    },
}

/// Shorthand result type.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::Empty => f.write_str("empty input"),
            Error::InvalidBin { index, value } => {
                write!(f, "bin {index} has invalid value {value}")
            }
            Error::NotNormalized { sum } => {
                write!(f, "bins sum to {sum}, expected 1")
            }
            Error::ZeroMass => f.write_str("total mass must be positive and finite"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DegenerateProfile { alpha_bar } => {
                write!(f, "skew profile has mean skew {alpha_bar}, need a value in (0, 1)")
            }
            Error::NotInterior => f.write_str("natural parameter is not in the open simplex"),
            Error::TooFewPoints { points, k } => {
                write!(f, "cannot pick {k} clusters from {points} points")
            }
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_same_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
