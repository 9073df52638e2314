use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolderError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Evaluation sits on an undamped pole (plasmon, bare transition, surface-shifted mode).
    #[error("pole: {0}")]
    Pole(String),
    /// `1 − α_v𝒢` is not positive at Matsubara index `n`.
    #[error("non-perturbative coupling unstable at Matsubara index {n} (1 - alpha*G = {value:e})")]
    Unstable { n: usize, value: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    /// A nested evaluation failed at the given distance.
    #[error("evaluation failed at {at:e} m: {source}")]
    At {
        at: f64,
        #[source]
        source: Box<PolderError>,
    },
}

impl PolderError {
    /// Innermost error, looking through [`PolderError::At`].
    pub fn root(&self) -> &PolderError {
        match self {
            PolderError::At { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, PolderError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(PolderError::Domain(msg.into()))
}
