//! Corpus handling, train/dev/test splitting, classification metrics and
//! inter-annotator agreement.

mod corpus;
mod kappa;
mod metrics;
mod report;
mod split;

pub use corpus::{read_corpus, write_corpus, Genre, Topic};
pub use kappa::{cohen_kappa, cohen_kappa_pair, read_ratings};
pub use metrics::{
    accuracy, confusion_metrics, f_measure, precision, recall, ClassificationMetrics,
    ConfusionCounts,
};
pub use report::{EvaluationReport, ReportRow};
pub use split::{split_corpus, split_sizes, CorpusSplit, SplitSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{0} is undefined: zero denominator")]
    UndefinedMetric(&'static str),
    #[error("invalid split spec: {0}")]
    InvalidSplitSpec(String),
    #[error("kappa needs at least two raters, got {0}")]
    InsufficientRaters(usize),
    #[error("kappa needs at least one rated item")]
    EmptyItems,
    #[error("item {item} has {got} ratings, expected {expected}")]
    RaggedRatings {
        item: usize,
        expected: usize,
        got: usize,
    },
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: duplicate topic id {id:?}")]
    DuplicateTopicId {
        path: String,
        line: usize,
        id: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
