use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // ---- input / contract violations ----
    #[error("malformed WAV container: {0}")]
    MalformedContainer(String),
    #[error("unsupported WAV encoding: format tag {format}, {bits} bits per sample")]
    UnsupportedEncoding { format: u16, bits: u16 },
    #[error("WAV data chunk holds no samples")]
    EmptyData,
    #[error("signal is identically zero")]
    AllZeroSignal,
    #[error("file name does not follow the corpus convention: {0}")]
    MalformedName(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid time series: {0}")]
    InvalidSeries(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("length {0} is not a power of two")]
    NonPowerOfTwo(usize),
    #[error("moment order q = 0 is singular here")]
    QZero,
    #[error("unsupported wavelet derivative order {0} (expected 1..=4)")]
    UnsupportedOrder(u32),
    #[error("series of length {len} is too short (need at least {min})")]
    TooShort { len: usize, min: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("signal of length {len} is too short for wavelet scale {scale}")]
    SignalTooShortForScale { scale: usize, len: usize },
    #[error("feature vector contains a non-finite value")]
    NonFiniteFeature,
    #[error("feature {0} has zero variance over the training set")]
    ZeroVarianceFeature(usize),
    #[error("training data contains a single class")]
    SingleClass,
    #[error("class {class} has {available} samples, need more than {required}")]
    InsufficientSamples {
        class: String,
        available: usize,
        required: usize,
    },
    #[error("class set mismatch: {0}")]
    ClassMismatch(String),

    // ---- degenerate analysis outcomes ----
    #[error(
        "circulant embedding is not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
    )]
    EmbeddingNotPsd { min_eigenvalue: f64 },
    #[error("zero local fluctuation at scale {scale}, segment {segment}")]
    ZeroLocalFluctuation { scale: usize, segment: usize },
    #[error("degenerate polynomial fit on a window of {0} samples")]
    DegenerateFit(usize),
    #[error("no modulus maxima at wavelet scale {scale}")]
    NoMaximaAtScale { scale: usize },
    #[error("degenerate singularity spectrum: {retained} usable points")]
    DegenerateSpectrum { retained: usize },
    #[error("fitted spectrum parabola opens upward (A = {0})")]
    UpwardParabola(f64),
    #[error("spectrum points are collinear; no quadratic can be fitted")]
    CollinearPoints,
    #[error("fitted spectrum parabola has no real roots")]
    NoRealRoots,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures that come from the signal being unanalyzable
    /// (monofractal collapse, empty maxima, flat segments) rather than from
    /// bad input or configuration.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::EmbeddingNotPsd { .. }
                | Error::ZeroLocalFluctuation { .. }
                | Error::DegenerateFit(_)
                | Error::NoMaximaAtScale { .. }
                | Error::DegenerateSpectrum { .. }
                | Error::UpwardParabola(_)
                | Error::CollinearPoints
                | Error::NoRealRoots
        )
    }
}
