use thiserror::Error;

use crate::costbenefit::ConversionOption;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("deterministic service time has no density")]
    NoDensity,

    #[error("service distribution exhausted at t = {t} (G(t) = 1)")]
    DistributionExhausted { t: f64 },

    #[error("option {option}: {source}")]
    Option {
        option: ConversionOption,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate threshold for {0}: cumulative hazard over the horizon is zero")]
    DegenerateThreshold(ConversionOption),

    #[error("closed-form exponential thresholds need exponential services; {0} is not (use the general thresholds)")]
    WrongForm(ConversionOption),

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn for_option(self, option: ConversionOption) -> Self {
        Error::Option {
            option,
            source: Box::new(self),
        }
    }
}
