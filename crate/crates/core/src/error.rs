use thiserror::Error;

/// Errors produced by the raster, loss and metric routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("raster dimensions must be at least 1x1, got {0}x{1}")]
    EmptyRaster(usize, usize),

    #[error("buffer length {len} does not match {width}x{height}")]
    BufferLength {
        len: usize,
        width: usize,
        height: usize,
    },

    #[error("no feature pixels")]
    NoFeaturePixels,

    #[error("need two objects, found {0}")]
    NeedTwoObjects(usize),

    #[error("degenerate class balance: image contains a single class")]
    DegenerateClassBalance,

    #[error("no shared background pixels between the two label maps")]
    NoSharedBackground,

    #[error("region is not single-class in the prediction")]
    RegionNotSingleClass,

    #[error("invalid probabilities at pixel ({x}, {y}): {reason}")]
    InvalidProbabilities { x: usize, y: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible synthetic spec: {0}")]
    Infeasible(String),

    #[error("cannot place {kind} error: {reason}")]
    Placement { kind: String, reason: String },

    #[error("malformed file: {0}")]
    Format(String),

    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
