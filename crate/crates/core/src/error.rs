use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension n = {0}: need n >= 2")]
    InvalidDimension(u32),

    #[error("{field} must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },

    #[error("{field} must be nonnegative, got {value}")]
    Negative { field: &'static str, value: f64 },

    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("in-diameter {in_diameter} exceeds diameter {diameter}")]
    InDiameterExceedsDiameter { in_diameter: f64, diameter: f64 },

    #[error("no applicable bound: provide a diameter or an in-diameter")]
    NoApplicableBound,

    #[error("t = {0} lies outside [-pi/2, pi/2]")]
    Domain(f64),

    #[error("bad integration interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },

    #[error("barrier value z(t0) = {0} is not positive")]
    NonPositiveBarrier(f64),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("radial coefficient is singular at the pole r = {0}")]
    Pole(f64),

    #[error("warp second derivative is numerically unstable near r = {0}")]
    WarpNotSmooth(f64),

    #[error("could not bracket the first eigenvalue (last upper estimate {0})")]
    BracketFailure(f64),

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("inverse iteration stalled after {0} iterations")]
    IterationStall(usize),

    #[error("discretization is not positive definite (pivot {pivot} at row {row})")]
    IndefiniteDiscretization { row: usize, pivot: f64 },

    #[error("profile changes sign in the interior (value {value} at r = {r})")]
    SignChange { r: f64, value: f64 },

    #[error("b must exceed 1, got {0}")]
    InvalidB(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors caused by the input (bad parameters, invalid models,
    /// malformed configuration) rather than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Pole(_)
                | Error::BracketFailure(_)
                | Error::NoConvergence(_)
                | Error::IterationStall(_)
                | Error::IndefiniteDiscretization { .. }
                | Error::SignChange { .. }
                | Error::NonPositiveBarrier(_)
        )
    }
}

pub(crate) fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { field, value });
    }
    if value <= 0.0 {
        return Err(Error::NonPositive { field, value });
    }
    Ok(value)
}

pub(crate) fn require_nonnegative(field: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite { field, value });
    }
    if value < 0.0 {
        return Err(Error::Negative { field, value });
    }
    Ok(value)
}
