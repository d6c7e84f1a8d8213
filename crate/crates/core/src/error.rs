use thiserror::Error;

/// Errors raised by the channel model and its analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a type invariant (non-positive spread, exponent out of range, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A formula has no finite value for the given inputs (e.g. rich Doppler, `W = P`).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// Argument outside the domain of a special function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The low-SNR closed forms do not apply at this operating point.
    #[error("outside validity region: {0}")]
    ValidityRegion(String),

    /// No parameter in the searched interval yields a positive error exponent.
    #[error("empty valid region: {0}")]
    EmptyRegion(String),

    /// Least-squares design matrix without full column rank.
    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),
}

impl Error {
    /// True for errors that signal the operating point left the regime where
    /// the closed forms hold, as opposed to malformed input.
    pub fn is_validity(&self) -> bool {
        matches!(self, Error::ValidityRegion(_) | Error::EmptyRegion(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}
