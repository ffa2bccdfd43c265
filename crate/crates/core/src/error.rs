use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants map one-to-one onto the failure modes the CLI reports as
/// domain errors (exit code 1).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed instance document: {0}")]
    Malformed(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),

    #[error("empty perturbation set for point `{0}`")]
    EmptyPerturbation(String),

    #[error("missing perturbation set for point `{0}`")]
    MissingPerturbation(String),

    #[error("hypothesis `{hypothesis}` has no label for point `{point}`")]
    MissingLabel { hypothesis: String, point: String },

    #[error("distribution `{name}` is invalid: {reason}")]
    InvalidDistribution { name: String, reason: String },

    #[error("unknown distribution `{0}`")]
    UnknownDistribution(String),

    #[error("empty sample")]
    EmptySample,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("instance too large: {what} would exceed the cap of {cap}")]
    TooLarge { what: &'static str, cap: u64 },

    #[error("unknown vertex")]
    UnknownVertex,

    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),

    #[error("search budget exceeded: optimum lies in [{lower}, {upper}]")]
    SearchBudgetExceeded { lower: usize, upper: usize },

    #[error("inward-inward conflict on edge {edge}: both endpoints force the edge toward themselves")]
    InwardConflict { edge: usize },

    #[error("locality violation: perturbation set of `{0}` queried outside the training sample")]
    LocalityViolation(String),

    #[error("training sample has size {got}, learner expects {expected}")]
    SampleSize { expected: usize, got: usize },

    #[error("learner `{0}` is not local")]
    NotLocal(String),

    #[error("unknown learner `{0}`")]
    UnknownLearner(String),

    #[error("the hypothesis class is empty")]
    EmptyClass,

    #[error("weak-learning failure in round {round}: no candidate reached robust risk <= 1/3 after {searched} tuples")]
    WeakLearningFailure { round: usize, searched: u64 },

    #[error("sample too small: need m > {required}, got {got}")]
    SampleTooSmall { required: u64, got: usize },

    #[error("distribution is not robustly realizable: {0}")]
    NotRealizable(String),

    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
