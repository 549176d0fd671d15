use thiserror::Error;

/// Errors produced by the assignment engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid pyramid: {0}")]
    InvalidPyramid(String),

    #[error("grid index ({grid_x}, {grid_y}) outside level P{level} ({width}x{height})")]
    OutOfGrid {
        level: u8,
        grid_x: u32,
        grid_y: u32,
        width: u32,
        height: u32,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate weighting data for target {target}: {reason}")]
    DegenerateWeights { target: usize, reason: String },

    #[error("prediction mismatch: {0}")]
    Predictions(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("degenerate quadrilateral: {0}")]
    DegenerateQuad(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
