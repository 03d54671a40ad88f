//! Loading resources and running a train/test experiment end to end.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::classifier::{
    quantize, train, ClassifierError, Label, LabeledVector, Model, TrainConfig,
};
use crate::eval::{CorpusSplit, EvaluationReport, Genre, Topic};
use crate::features::{Analyzer, CueLists, FeatureError, ShifterConfig};
use crate::lexicon::{IdiomLexicon, LexiconError, Polarity, SentimentLexicon};
use crate::preprocess::{PreprocessError, StopWords, TableTagger};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error("topic {0:?} has no PO/NG label")]
    Unlabeled(String),
}

/// File locations for every resource the analyzer needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePaths {
    pub lexicon: PathBuf,
    pub idioms: PathBuf,
    pub negators: PathBuf,
    pub intensifiers: PathBuf,
    pub questions: PathBuf,
    pub wishful: PathBuf,
    pub stopwords: PathBuf,
    pub tags: PathBuf,
}

impl ResourcePaths {
    /// The conventional file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        ResourcePaths {
            lexicon: dir.join("lexicon.tsv"),
            idioms: dir.join("idioms.tsv"),
            negators: dir.join("negators.txt"),
            intensifiers: dir.join("intensifiers.txt"),
            questions: dir.join("questions.txt"),
            wishful: dir.join("wishful.txt"),
            stopwords: dir.join("stopwords.txt"),
            tags: dir.join("tags.tsv"),
        }
    }

    pub fn all(&self) -> [&Path; 8] {
        [
            &self.lexicon,
            &self.idioms,
            &self.negators,
            &self.intensifiers,
            &self.questions,
            &self.wishful,
            &self.stopwords,
            &self.tags,
        ]
    }
}

/// Owned resources; borrow an [`Analyzer`] from them.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicon: SentimentLexicon,
    pub idioms: IdiomLexicon,
    pub cues: CueLists,
    pub stopwords: StopWords,
    pub tagger: TableTagger,
    pub shifters: ShifterConfig,
}

impl Resources {
    pub fn load(paths: &ResourcePaths) -> Result<Self, PipelineError> {
        let lexicon = SentimentLexicon::load(&paths.lexicon)?;
        Ok(Resources {
            idioms: IdiomLexicon::load(&paths.idioms)?,
            cues: CueLists::load(
                &paths.negators,
                &paths.intensifiers,
                &paths.questions,
                &paths.wishful,
            )?,
            stopwords: StopWords::load(&paths.stopwords)?,
            tagger: TableTagger::load(&paths.tags)?.with_lexicon_defaults(&lexicon),
            lexicon,
            shifters: ShifterConfig::default(),
        })
    }

    /// Replaces the lexicon, keeping every other resource.
    pub fn with_lexicon(mut self, lexicon: SentimentLexicon) -> Self {
        self.tagger = self.tagger.with_lexicon_defaults(&lexicon);
        self.lexicon = lexicon;
        self
    }

    pub fn analyzer(&self) -> Analyzer<'_> {
        Analyzer::new(
            &self.lexicon,
            &self.idioms,
            &self.cues,
            &self.stopwords,
            &self.tagger,
        )
        .with_config(self.shifters)
    }
}

/// Feature vectors for labeled topics, commented with the topic id.
pub fn vectorize(
    analyzer: &Analyzer<'_>,
    topics: &[Topic],
) -> Result<Vec<LabeledVector>, PipelineError> {
    let labels = topics
        .iter()
        .map(|t| {
            t.label
                .and_then(Label::from_polarity)
                .ok_or_else(|| PipelineError::Unlabeled(t.id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let texts: Vec<&str> = topics.iter().map(|t| t.text.as_str()).collect();
    let vectors = analyzer.extract_all(&texts)?;
    Ok(topics
        .iter()
        .zip(labels)
        .zip(vectors)
        .map(|((t, label), v)| LabeledVector::new(label, v).with_comment(t.id.clone()))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub id: String,
    pub genre: Option<Genre>,
    pub gold: Option<Polarity>,
    pub label: Polarity,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub model: Model,
    pub report: EvaluationReport,
    pub predictions: Vec<Prediction>,
}

/// Predicts a label and margin for each topic.
pub fn predict_topics(
    analyzer: &Analyzer<'_>,
    model: &Model,
    topics: &[Topic],
) -> Result<Vec<Prediction>, PipelineError> {
    let texts: Vec<&str> = topics.iter().map(|t| t.text.as_str()).collect();
    let vectors = analyzer.extract_all(&texts)?;
    topics
        .iter()
        .zip(vectors)
        .map(|(t, v)| {
            let (label, margin) = model.predict(&v)?;
            Ok(Prediction {
                id: t.id.clone(),
                genre: t.genre,
                gold: t.label,
                label: label.polarity(),
                margin,
            })
        })
        .collect()
}

/// Trains on `split.train` and reports on `split.test`.
///
/// Training vectors are rounded exactly as an SVM-light file would round
/// them, so a file-based extract, train, predict sequence gives the same
/// model and predictions.
pub fn run_experiment(
    analyzer: &Analyzer<'_>,
    split: &CorpusSplit,
    config: &TrainConfig,
) -> Result<Experiment, PipelineError> {
    let mut train_set = vectorize(analyzer, &split.train)?;
    for lv in &mut train_set {
        lv.vector = quantize(&lv.vector);
    }
    let model = train(&train_set, config)?;
    let predictions = predict_topics(analyzer, &model, &split.test)?;
    let mut scored = Vec::with_capacity(predictions.len());
    for p in &predictions {
        let gold = p
            .gold
            .ok_or_else(|| PipelineError::Unlabeled(p.id.clone()))?;
        scored.push((p.genre, gold, p.label));
    }
    Ok(Experiment {
        model,
        report: EvaluationReport::from_predictions(scored),
        predictions,
    })
}
