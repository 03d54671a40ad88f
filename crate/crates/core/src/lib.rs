//! Lexicon-based sentiment analysis for Modern Standard Arabic and Egyptian
//! dialect text.
//!
//! Topics are normalized and tokenized ([`preprocess`]), scored against a
//! polarity lexicon and an idiom lexicon ([`lexicon`]), turned into a fixed
//! feature vector ([`features`]) and classified by a linear model
//! ([`classifier`]). [`expansion`] grows the lexicon from a corpus and
//! [`eval`] holds splitting, metrics and agreement measures.

pub mod classifier;
pub mod eval;
pub mod expansion;
pub mod features;
pub mod lexicon;
pub mod pipeline;
pub mod preprocess;

pub use classifier::{train, Label, LabeledVector, Model, TrainConfig};
pub use eval::Topic;
pub use features::{Analyzer, CueLists, FeatureVector, ShifterConfig};
pub use lexicon::{IdiomLexicon, LexiconEntry, Polarity, SentimentLexicon};
pub use preprocess::{normalize_text, PosTag, PosTagger, StopWords, TableTagger};
