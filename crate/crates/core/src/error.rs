use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Variants fall into two groups: precondition violations (`is_validation`)
/// and numerical failures such as non-convergence.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at non-positive integer {0}")]
    GammaPole(f64),
    #[error("parameter pole: {0}")]
    ParameterPole(String),
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("too many roots: more than {0} found in the scan interval")]
    TooManyRoots(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("unsupported singularity: {0}")]
    UnsupportedSingularity(String),
    #[error("level tracking is ambiguous at loop parameter {0}; use more steps")]
    TrackingAmbiguity(f64),
    #[error("loop is not closed")]
    OpenLoop,
    #[error("unsupported loop: {0}")]
    UnsupportedLoop(String),
    #[error("level shift is not uniform: {0:?}")]
    NonUniformShift(Vec<(usize, Option<i64>)>),
    #[error("not an anholonomy: spectrum at loop end differs from start by {0:.3e}")]
    SpectrumNotRecovered(f64),
    #[error("grid does not resolve the basis: spacing {spacing} exceeds {limit}")]
    UnderResolved { spacing: f64, limit: f64 },
    #[error("state expansion residual {0:.3e} is too large")]
    ExpansionResidual(f64),
    #[error("method {method} does not support {statistics} statistics")]
    MethodStatistics { method: String, statistics: String },
    #[error("root not bracketed: {0}")]
    NotBracketed(String),
    #[error("evaluation outside supported range: {0}")]
    OutOfRange(String),
}

impl Error {
    /// True when the error reports a bad input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GammaPole(_)
                | Error::ParameterPole(_)
                | Error::InvalidParameter(_)
                | Error::NotUnitary(_)
                | Error::UnsupportedSingularity(_)
                | Error::OpenLoop
                | Error::UnsupportedLoop(_)
                | Error::MethodStatistics { .. }
                | Error::UnderResolved { .. }
                | Error::OutOfRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
