//! Error taxonomy shared by every module and the CLI.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // lexicon
    #[error("line {line}: malformed record: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: duplicate term `{term}`")]
    DuplicateTerm { line: usize, term: String },
    #[error("score {value} out of range {range}{}", context_suffix(.context))]
    ScoreOutOfRange {
        value: f64,
        range: &'static str,
        context: Option<String>,
    },
    #[error("subset term `{0}` is not present in the lexicon")]
    SubsetTermMissing(String),
    #[error("basic emotion `{0}` has neither a lexicon term nor an explicit override")]
    BasicEmotionUnresolvable(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    // space
    #[error("invalid VAD point: {0}")]
    InvalidPoint(String),
    #[error("requested {requested} neighbors but the space holds {available} terms")]
    InvalidCount { requested: usize, available: usize },
    #[error("probe set is empty")]
    EmptyProbeSet,
    #[error("target mean {target} is not reachable with {entries} entries")]
    TargetUnreachable { target: f64, entries: usize },
    #[error("negative or non-finite radius {0}")]
    InvalidRadius(f64),

    // clustering
    #[error("seed points for {0} and {1} coincide")]
    DegenerateSeeds(String, String),
    #[error("emotion space has {0} entries, at least 6 are required")]
    EmptySpace(usize),
    #[error("term `{0}` has no cluster assignment")]
    AssignmentMismatch(String),
    #[error("cluster model document: {0}")]
    InvalidModel(String),

    // metrics
    #[error("length mismatch: {left} truth vs {right} predictions")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("row {0} is not a probability distribution")]
    NotAProbability(usize),
    #[error("row {0} is not one-hot")]
    NotOneHot(usize),

    // similarity
    #[error("line {line}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("zero-norm vector{}", context_suffix(.0))]
    ZeroVector(Option<String>),
    #[error("no term from either list is in the embedding vocabulary")]
    NoOverlapWithVocabulary,

    // harness
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("duplicate sample id `{0}`")]
    DuplicateSampleId(String),
    #[error("unknown emotion label `{0}`")]
    UnknownLabel(String),
    #[error("sample `{0}` has no discrete label")]
    MissingLabels(String),
    #[error("{} prediction(s) reference unknown sample ids: {}", .0.len(), .0.join(", "))]
    UnmatchedSampleId(Vec<String>),
    #[error("no prediction joined a manifest record")]
    NoJoinedRecords,
    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

fn context_suffix(context: &Option<String>) -> String {
    match context {
        Some(c) => format!(" ({c})"),
        None => String::new(),
    }
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    /// Stable machine-readable identifier, one per variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::MalformedLine { .. } => "MalformedLine",
            Error::DuplicateTerm { .. } => "DuplicateTerm",
            Error::ScoreOutOfRange { .. } => "ScoreOutOfRange",
            Error::SubsetTermMissing(_) => "SubsetTermMissing",
            Error::BasicEmotionUnresolvable(_) => "BasicEmotionUnresolvable",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidPoint(_) => "InvalidPoint",
            Error::InvalidCount { .. } => "InvalidCount",
            Error::EmptyProbeSet => "EmptyProbeSet",
            Error::TargetUnreachable { .. } => "TargetUnreachable",
            Error::InvalidRadius(_) => "InvalidRadius",
            Error::DegenerateSeeds(..) => "DegenerateSeeds",
            Error::EmptySpace(_) => "EmptySpace",
            Error::AssignmentMismatch(_) => "AssignmentMismatch",
            Error::InvalidModel(_) => "InvalidModel",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::EmptyInput => "EmptyInput",
            Error::TooFewSamples(_) => "TooFewSamples",
            Error::NotAProbability(_) => "NotAProbability",
            Error::NotOneHot(_) => "NotOneHot",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroVector(_) => "ZeroVector",
            Error::NoOverlapWithVocabulary => "NoOverlapWithVocabulary",
            Error::MalformedRecord { .. } => "MalformedRecord",
            Error::DuplicateSampleId(_) => "DuplicateSampleId",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::MissingLabels(_) => "MissingLabels",
            Error::UnmatchedSampleId(_) => "UnmatchedSampleId",
            Error::NoJoinedRecords => "NoJoinedRecords",
            Error::InvalidRatios(_) => "InvalidRatios",
            Error::Io { .. } => "Io",
        }
    }

    /// Process exit status for the CLI: 1 for usage problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::InvalidRatios(_) | Error::InvalidRadius(_) => 1,
            _ => 2,
        }
    }
}
