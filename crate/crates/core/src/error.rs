use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the simulation, analysis and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("cell ({x}, {y}) is outside the {width}x{height} lattice")]
    OutOfBounds {
        x: i64,
        y: i64,
        width: usize,
        height: usize,
    },

    #[error("population of {requested} exceeds the {available} habitable cells")]
    Capacity { requested: usize, available: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("calibration failed: per-bin mean frequencies {means:?} are not strictly increasing")]
    CalibrationFailure { means: Vec<f64> },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
