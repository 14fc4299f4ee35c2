use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Why a metric has no finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Undefined {
    EmptyGraph,
    TooFewVertices,
    NoEdges,
    NoReachablePairs,
    ZeroDenominator,
    ZeroNumerator,
    InfiniteAsymmetry,
    EmptyCorpus,
    ZeroVariance,
    TooFewPoints,
    StageSkipped,
}

impl Undefined {
    pub fn as_str(self) -> &'static str {
        match self {
            Undefined::EmptyGraph => "empty_graph",
            Undefined::TooFewVertices => "too_few_vertices",
            Undefined::NoEdges => "no_edges",
            Undefined::NoReachablePairs => "no_reachable_pairs",
            Undefined::ZeroDenominator => "zero_denominator",
            Undefined::ZeroNumerator => "zero_numerator",
            Undefined::InfiniteAsymmetry => "infinite_asymmetry",
            Undefined::EmptyCorpus => "empty_corpus",
            Undefined::ZeroVariance => "zero_variance",
            Undefined::TooFewPoints => "too_few_points",
            Undefined::StageSkipped => "stage_skipped",
        }
    }
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Undefined {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("undefined metric: {0}")]
    Undefined(Undefined),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps the error with the name of the pipeline stage it came from.
    pub fn in_stage(self, stage: &'static str) -> Error {
        match self {
            Error::Stage { .. } => self,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<Undefined> for Error {
    fn from(reason: Undefined) -> Self {
        Error::Undefined(reason)
    }
}
