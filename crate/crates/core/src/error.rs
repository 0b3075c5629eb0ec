use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("invalid path configuration: {0}")]
    InvalidPath(String),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("{what}: gap {gap:e} exceeds tolerance {tol:e}")]
    Disagreement { what: String, gap: f64, tol: f64 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("sequence is not monotone nonincreasing in [0,1]: {0}")]
    NotMonotone(String),
    #[error("solution blew up near x = {0}")]
    BlowUp(f64),
    #[error("x = {0} lies outside the tabulated grid")]
    OutOfGrid(f64),
    #[error("grid too narrow: {0}")]
    GridUnderspan(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::InvalidPartition(_) | Error::InvalidTableau(_) | Error::InvalidPath(_) => 2,
            Error::Disagreement { .. } | Error::PrecisionExhausted(_) | Error::BlowUp(_) | Error::NotMonotone(_) => 3,
            Error::Budget(_) => 4,
            Error::GridUnderspan(_) | Error::OutOfGrid(_) => 5,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }
}
