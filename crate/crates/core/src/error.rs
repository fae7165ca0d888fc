use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// The requested schedule value sits exactly on a drive breakpoint where
    /// the transverse-field derivative is one-sided.
    #[error("s = {s} is a drive breakpoint (site {site}); offset it to evaluate a derivative")]
    AtBreakpoint { s: f64, site: usize },

    /// The quadratic boson expansion is not valid at this point.
    #[error("semiclassical expansion breaks down at s = {s}: epsilon = {epsilon}, delta = {delta}")]
    ExpansionBreakdown { s: f64, epsilon: f64, delta: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("problem too large: {what} = {size} exceeds the configured limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("grid too coarse to resolve the phase boundary: {0}")]
    GridTooCoarse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `lo <= x <= hi`.
pub(crate) fn check_unit<T: crate::Real>(name: &'static str, x: T, lo: T, hi: T) -> Result<()> {
    if x.is_nan() || x < lo || x > hi {
        return Err(Error::invalid(
            name,
            format!("{x} outside [{lo}, {hi}]"),
        ));
    }
    Ok(())
}
