use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed spin value {0}: spins must be non-negative multiples of 1/2")]
    MalformedSpin(f64),

    #[error("projection {m} is inconsistent with spin {j}")]
    InconsistentProjection { j: f64, m: f64 },

    #[error("qubit index out of range or repeated: ({0}, {1})")]
    QubitIndex(usize, usize),

    #[error("invalid gate: pair {pair} with power {power}")]
    InvalidGate { pair: usize, power: f64 },

    #[error("unsupported qubit layout {0:?}")]
    Layout(Vec<String>),

    #[error("operator is not block diagonal in the total-angular-momentum basis (max off-block entry {0:e})")]
    OffBlockLeakage(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("invalid search configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
