use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("K diverges at m=1")]
    KDiverges,

    #[error("non-periodic limit: {0} has no finite real period at m=1")]
    NonPeriodic(&'static str),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("pole at zeta={0}")]
    Pole(f64),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("topology mismatch: {0}")]
    Topology(String),

    #[error("grid is not symmetric about zeta=0")]
    AsymmetricGrid,

    #[error("velocity unidentifiable: profile derivative vanishes")]
    VelocityUnidentifiable,

    #[error("incompatible profiles: {0}")]
    Incompatible(String),

    #[error("blow-up at t={t}: max |u_k| = {max_coefficient:e}")]
    BlowUp { t: f64, max_coefficient: f64 },

    #[error("potential does not decay: {0}")]
    NonDecaying(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
