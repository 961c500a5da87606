use core::fmt;

/// Errors produced by spline construction, EEF building and decomposition.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Abscissas (or sample times) are not strictly increasing.
    NonIncreasingAbscissa { index: usize },
    /// Not enough points for the requested spline degree.
    TooFewPoints { needed: usize, got: usize },
    /// The assembled linear system is numerically singular.
    SingularSystem,
    /// Spline degree outside the supported set for the operation.
    UnsupportedDegree(usize),
    /// Boundary condition kind cannot be used with the spline degree.
    UnsupportedBoundary { degree: usize },
    /// Knot offset outside the open interval (0, 1).
    InvalidAlpha,
    /// A NaN or infinite input value.
    NonFinite,
    /// Evaluation point outside the spline domain.
    OutOfDomain,
    /// Parallel arrays of different length.
    LengthMismatch { expected: usize, got: usize },
    /// Control point indices violate their invariants.
    InvalidControlPoints,
    /// Fewer control points than the spline degree needs.
    TooFewControlPoints { needed: usize, got: usize },
    /// Chained segments do not share their boundary sample time.
    NonAbuttingSegments { segment: usize },
    /// Series too short to be decomposed.
    DegenerateSeries,
    /// Image too small in the scan direction.
    ImageTooSmall,
    /// Image dimensions and pixel buffer disagree.
    InvalidImage,
    /// Periodic sampling keeps fewer control points than the spline needs.
    StrideTooLarge,
    /// Periodic sampling stride below 1.
    InvalidStride,
    /// Invalid parameter value.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonIncreasingAbscissa { index } => {
                write!(f, "abscissas not strictly increasing at index {index}")
            }
            Error::TooFewPoints { needed, got } => {
                write!(f, "too few points: need at least {needed}, got {got}")
            }
            Error::SingularSystem => f.write_str("spline system is numerically singular"),
            Error::UnsupportedDegree(d) => write!(f, "unsupported spline degree {d}"),
            Error::UnsupportedBoundary { degree } => {
                write!(f, "boundary condition not supported for degree {degree}")
            }
            Error::InvalidAlpha => f.write_str("knot offset alpha must lie in (0, 1)"),
            Error::NonFinite => f.write_str("non-finite input value"),
            Error::OutOfDomain => f.write_str("evaluation point outside the spline domain"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::InvalidControlPoints => {
                f.write_str("control points must be strictly increasing, in range and include both ends")
            }
            Error::TooFewControlPoints { needed, got } => {
                write!(f, "too few control points: need {needed}, got {got}")
            }
            Error::NonAbuttingSegments { segment } => {
                write!(f, "segment {segment} does not start where the previous one ends")
            }
            Error::DegenerateSeries => f.write_str("series too short to decompose"),
            Error::ImageTooSmall => f.write_str("image too small for decomposition"),
            Error::InvalidImage => f.write_str("pixel buffer does not match image dimensions"),
            Error::StrideTooLarge => f.write_str("sampling stride leaves too few control points"),
            Error::InvalidStride => f.write_str("sampling stride must be at least 1"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
