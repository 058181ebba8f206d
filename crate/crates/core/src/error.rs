//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("taxonomy error: {0}")]
    Taxonomy(String),

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("unknown filter attribute `{attr}` (valid: {valid})")]
    UnknownFilterAttribute { attr: String, valid: String },

    #[error("invalid filter expression `{0}`")]
    InvalidFilter(String),

    #[error("empty training set: no document passed the label/length rules; try a smaller --min-words")]
    EmptyTrainingSet,

    #[error("document `{0}` has an empty label set")]
    EmptyLabelSet(String),

    #[error("label {label} outside taxonomy of {k} fields")]
    LabelOutsideTaxonomy { label: usize, k: usize },

    #[error("unscorable abstract: no in-vocabulary token")]
    UnscorableAbstract,

    #[error("unknown field id {0}")]
    UnknownField(usize),

    #[error("no basis for vector: paper `{id}` has no resolvable {mode} neighbor")]
    NoVectorBasis { id: String, mode: &'static str },

    #[error("need at least {need} non-empty fields, found {found}")]
    TooFewFields { need: usize, found: usize },

    #[error("distance matrices share only {0} field pairs; need at least 3")]
    TooFewSharedPairs(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("probability vector has positive mass on field {0}, which is unavailable in the distance matrix")]
    UnavailableField(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("rank-deficient design: dependent column(s) {0}")]
    RankDeficient(String),

    #[error("invalid model file: {0}")]
    ModelFormat(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
