use thiserror::Error;

use crate::math::RegimeLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid channel parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("operation needs the weak interference regime, channel is {0}")]
    RegimeMismatch(RegimeLabel),

    #[error("weak interference regime violated at scale {scale:e} (regime {label})")]
    RegimeViolatedAtScale { scale: f64, label: RegimeLabel },

    #[error("power-split formula is singular (zero denominator)")]
    SingularPowerSplit,

    #[error("relay budget exceeded: r_a + r_b = {used} > R0 = {available}")]
    RelayBudget { used: f64, available: f64 },

    #[error("projection is unbounded on the kept variables")]
    UnboundedProjection,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("singular conditional covariance for {{{0}}}")]
    SingularCovariance(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
