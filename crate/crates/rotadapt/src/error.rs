use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    /// An argument was outside the accepted domain (NaN, infinite, out of range).
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),

    /// Two point sets that must have equal cardinality did not.
    #[error("size mismatch: {left} points vs {right} points")]
    SizeMismatch { left: usize, right: usize },

    /// The input carries too little information for the operation
    /// (coincident points, constant x-values, fewer distinct points than clusters).
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    /// Rotating a line by `theta` produced a (near-)vertical line that cannot be
    /// expressed in slope/intercept form.
    #[error("rotated line is vertical: theta = {theta}, input slope = {slope}")]
    VerticalLine { theta: f64, slope: f64 },

    /// Every bootstrap iteration of the adaptation procedure failed.
    #[error("adaptation failed: all {iterations} iterations were rejected")]
    AdaptationFailed { iterations: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
