use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid oscillator parameters: {0}")]
    InvalidParams(String),

    #[error("invalid Gaussian state: {0}")]
    InvalidState(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("step too coarse: rate*dt = {product} exceeds {cap} (rate {rate}, dt {dt})")]
    StepTooCoarse {
        rate: f64,
        dt: f64,
        product: f64,
        cap: f64,
    },

    #[error("trajectory {index} failed: {source}")]
    Trajectory {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("under-resolved quadrature: {0}")]
    Resolution(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
