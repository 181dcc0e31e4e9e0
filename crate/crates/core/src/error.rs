use thiserror::Error;

/// Errors raised by model construction, the numerical solvers and the CLI layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("[E-DIM] dimension must be at least 3, got {0}")]
    DimensionTooSmall(u32),

    #[error(
        "[E-CHARGE] even dimension {dim} requires magnetic charge 0 or 1/2, got 2mu = {twice_mu}"
    )]
    EvenDimensionCharge { dim: u32, twice_mu: i64 },

    #[error("[E-FINITE] {name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("[E-RANGE] {what} = {value} outside admissible interval ({lo}, {hi})")]
    Range {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("[E-WEIGHT] {0}")]
    InvalidWeight(String),

    #[error("[E-CONFIG] {0}")]
    Config(String),

    #[error("[E-NUMERIC] {0}")]
    Numeric(String),

    #[error("[E-BRACKET] {0}")]
    Bracket(String),

    #[error(
        "[E-SINGULAR] point {point:?} lies on the excluded set (origin or negative 0-th axis)"
    )]
    CoordinateSingularity { point: Vec<f64> },
}

impl Error {
    /// Short diagnostic code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionTooSmall(_) => "E-DIM",
            Error::EvenDimensionCharge { .. } => "E-CHARGE",
            Error::NonFinite { .. } => "E-FINITE",
            Error::Range { .. } => "E-RANGE",
            Error::InvalidWeight(_) => "E-WEIGHT",
            Error::Config(_) => "E-CONFIG",
            Error::Numeric(_) => "E-NUMERIC",
            Error::Bracket(_) => "E-BRACKET",
            Error::CoordinateSingularity { .. } => "E-SINGULAR",
        }
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionTooSmall(_)
                | Error::EvenDimensionCharge { .. }
                | Error::NonFinite { .. }
                | Error::Range { .. }
                | Error::InvalidWeight(_)
                | Error::Config(_)
                | Error::CoordinateSingularity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
