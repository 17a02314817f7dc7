use thiserror::Error;

use crate::integral::IntegralVerdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid jump measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid process specification: {0}")]
    InvalidSpec(String),

    #[error("the jump part must be of bounded variation")]
    BvRequired,

    #[error("{family} does not supply the functional {functional}")]
    UnsupportedFunctional { family: &'static str, functional: String },

    #[error("integrand returned a non-finite value {value} at u = {u}")]
    Evaluation { u: f64, value: f64 },

    #[error("inconclusive verdict at parameter {param} while bracketing a critical constant")]
    InconclusiveBracket { param: f64 },

    #[error("verdict is not monotone in the parameter: convergent at {convergent_at}, divergent at {divergent_at}")]
    NonMonotone { convergent_at: f64, divergent_at: f64 },

    #[error("inconclusive integral test `{label}`")]
    Inconclusive {
        label: String,
        verdict: Box<IntegralVerdict>,
    },

    #[error("the subordinator test needs an infinite-activity measure")]
    InfiniteActivityRequired,

    #[error("the subordinator test needs a measure carried by (0, 1]")]
    PositiveSideRequired,

    #[error("sampling is not supported for {0}")]
    SamplingUnsupported(&'static str),

    #[error("non-finite sample at level {level} of path {path}")]
    NonFiniteSample { path: u64, level: usize },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
