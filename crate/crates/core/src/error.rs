use thiserror::Error;

/// Errors raised by the transform, operator and approximation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("angle {theta} is degenerate (|sin theta| = {sin_abs:e})")]
    AngleDegenerate { theta: f64, sin_abs: f64 },

    #[error("grid too large for direct quadrature: {samples} samples per dimension (limit {limit})")]
    GridTooLarge { samples: usize, limit: usize },

    #[error("signals live on different grids")]
    GridMismatch,

    #[error("shift component {component} is not an integer multiple of the grid spacing {spacing}")]
    OffGridShift { component: f64, spacing: f64 },

    #[error("scale {0} has no small rational representation")]
    IrrationalScale(f64),

    #[error("path of length {got} does not fit a network of depth {depth}")]
    PathArityMismatch { got: usize, depth: usize },

    #[error("feature trees have different keys at level {0}")]
    KeyMismatch(usize),

    #[error("operator does not commute with theta-translation: {0}")]
    NonCommutingOps(String),

    #[error("output atom does not decay: tail value {0:e}")]
    NoDecay(f64),

    #[error("truncation window drops {lost:e} of the fiber energy")]
    TruncationLoss { lost: f64 },

    #[error("truncation window of {window} offsets is too small for band width {needed}")]
    WindowTooSmall { window: usize, needed: usize },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("rank {ell} is invalid for {available} available dimensions")]
    BadRank { ell: usize, available: usize },

    #[error("tile is not a multi-tile at level {0}")]
    NotMultiTile(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
