use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {value} is outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("community {community} has {size} node(s); a within-community estimate needs at least 2")]
    DegenerateCommunity { community: usize, size: usize },

    #[error("no valid common size: min({n_g}, {n_h}) is smaller than K = {k}")]
    NoValidSize { n_g: usize, n_h: usize, k: usize },

    #[error("n = {n} is not a positive multiple of K = {k}")]
    NotMultiple { n: usize, k: usize },

    #[error("K = {k} exceeds the permutation cap of {cap}; exact alignment would enumerate K! permutations (use a heuristic alignment instead)")]
    PermutationCap { k: usize, cap: usize },

    #[error("sample count mismatch: {g} G-graphs vs {h} H-graphs")]
    SampleCountMismatch { g: usize, h: usize },

    #[error("all graphs must share one vertex-set size for this test")]
    UnequalGraphSizes,

    #[error("the split-sample statistic needs an even number of samples >= 2, got {0}")]
    OddSampleCount(usize),

    #[error("row {row} of the series has zero variance")]
    ZeroVariance { row: usize },

    #[error("edge count {requested} is out of range (max {max})")]
    EdgeCountOutOfRange { requested: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidProbability { .. } => "invalid-probability",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::MalformedMatrix(_) => "malformed-matrix",
            Error::DegenerateCommunity { .. } => "degenerate-community",
            Error::NoValidSize { .. } => "no-valid-size",
            Error::NotMultiple { .. } => "not-multiple",
            Error::PermutationCap { .. } => "permutation-cap",
            Error::SampleCountMismatch { .. } => "sample-count-mismatch",
            Error::UnequalGraphSizes => "unequal-graph-sizes",
            Error::OddSampleCount(_) => "odd-sample-count",
            Error::ZeroVariance { .. } => "zero-variance",
            Error::EdgeCountOutOfRange { .. } => "edge-count-out-of-range",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Manifest(_) => "manifest",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidProbability { value })
    }
}
