use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("packet width {delta0} is below the resolvable limit {min} (4·dx)")]
    GridTooCoarse { delta0: f64, min: f64 },
    #[error("packet centred at {center} with width {delta0} does not fit in [-{half}, {half}]")]
    PacketOutOfDomain { center: f64, delta0: f64, half: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("root bracketing failed: {0}")]
    ConvergenceFailure(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("time step {dt} exceeds the maximum {max}")]
    StepTooLarge { dt: f64, max: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no classification rule matched the trace")]
    Ambiguous,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("traces do not overlap in time")]
    NoOverlap,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
