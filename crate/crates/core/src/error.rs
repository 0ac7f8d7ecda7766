use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside domain ({requirement})")]
    Domain {
        function: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("{what} did not converge: estimate {estimate:e}, error {error:e} above tolerance {tolerance:e}")]
    NotConverged {
        what: &'static str,
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("channel {channel} is not defined for {theory}")]
    UnknownChannel {
        channel: &'static str,
        theory: &'static str,
    },

    #[error("fit needs at least {needed} points in the window, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("fit needs positive data, got y = {y} at x = {x}")]
    NonPositive { x: f64, y: f64 },

    #[error("fit window [{lo}, {hi}] is not inside the sampled range [{min}, {max}]")]
    WindowOutsideRange { lo: f64, hi: f64, min: f64, max: f64 },

    #[error("{n} sites exceed the budget of {max}; try a spacing of at least {suggested_a}")]
    TooManySites {
        n: usize,
        max: usize,
        suggested_a: f64,
    },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("no power-law decay for this channel: {0}")]
    Unclassifiable(String),

    #[error("profiles disagree at the overlap x = {x}: {s_fine} vs {s_coarse}")]
    StitchMismatch { x: f64, s_fine: f64, s_coarse: f64 },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotConverged { .. } | Error::Eigen(_) | Error::StitchMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
