use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum (2j={j2}, 2m={m2})")]
    AngularMomentum { j2: i32, m2: i32 },

    #[error("2j={0} exceeds the supported maximum of 20")]
    AngularMomentumTooLarge(i32),

    #[error("parameter out of range: {0}")]
    Range(String),

    #[error("axis error: {0}")]
    Axis(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("state norm {norm} is outside (0, 1 + 1e-9]")]
    Normalization { norm: f64 },

    #[error("unknown channel key {0}")]
    UnknownChannel(String),

    #[error("invalid channel table: {0}")]
    Table(String),

    #[error("branching weights sum to {0}, expected 1")]
    BranchingSum(f64),

    #[error("invalid width profile: {0}")]
    WidthProfile(String),

    #[error("masses must be positive (got {0}, {1})")]
    NonPositiveMass(f64, f64),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("cannot read {path}: {source}")]
    Input {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
