use thiserror::Error;

/// Errors produced by the transform, estimation and metric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame dimensions must be non-zero, got {width}x{height}")]
    ZeroDimensions { width: usize, height: usize },
    #[error("sample buffer holds {got} values, expected {expected}")]
    SampleCount { expected: usize, got: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("bit depth {0} is outside 1..=16")]
    BitDepth(u8),
    #[error("sample {value} at index {index} does not fit {bit_depth}-bit unsigned range")]
    SampleRange {
        index: usize,
        value: i32,
        bit_depth: u8,
    },
    #[error("volume needs at least one frame")]
    EmptyVolume,
    #[error("frame count {0} is not a positive even number")]
    OddFrameCount(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("cell size {cell} exceeds frame {width}x{height}")]
    CellTooLarge {
        cell: usize,
        width: usize,
        height: usize,
    },
    #[error("k = {k} exceeds node count {nodes}")]
    TooManyNeighbours { k: usize, nodes: usize },
    #[error("row {0} of the matrix has no positive weight")]
    ZeroRow(usize),
    #[error("row {0} of the prediction matrix does not sum to one")]
    NotStochastic(usize),
    #[error("duplicate matrix entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("matrix entry ({row}, {col}) outside {rows}x{cols}")]
    EntryOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix weight {0} is negative or not finite")]
    BadWeight(f64),
    #[error("compensation for method {expected} required, got {got}")]
    MethodMismatch {
        expected: &'static str,
        got: &'static str,
    },
    #[error("motion vector ({dx}, {dy}) exceeds search range {range}")]
    VectorOutOfRange { dx: i32, dy: i32, range: u8 },
    #[error("motion field has {got} pairs, expected {expected}")]
    MotionCount { expected: usize, got: usize },
    #[error("empty input")]
    Empty,
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;
