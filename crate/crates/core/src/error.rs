use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("no closed-form volume polynomial for {0}")]
    UnsupportedVariant(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: String },

    #[error("empty sample")]
    EmptySample,

    #[error("moment estimator pole: the moment equation denominator is exactly zero")]
    Pole,

    #[error("rejection sampling acceptance rate {rate:.3e} is below 1e-4 (degenerate band geometry)")]
    RejectionEfficiency { rate: f64 },

    #[error("EM did not converge after {iterations} iterations (last step {last_step:.3e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error("rank-deficient least-squares design: {0}")]
    RankDeficient(String),

    #[error("{failed} of {total} replications failed")]
    ReplicationFailures { failed: usize, total: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical breakdown.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Pole
                | Error::RejectionEfficiency { .. }
                | Error::NoConvergence { .. }
                | Error::Optimizer(_)
                | Error::RankDeficient(_)
                | Error::ReplicationFailures { .. }
        )
    }
}
