//! Corpus-driven lexicon growth.
//!
//! Candidate words (JJ/NN/VB tokens unknown to the lexicon) are looked up
//! through a [`SynsetProvider`]. The polarities of their synonyms, plus the
//! flipped polarities of their antonyms, decide the outcome: unanimous
//! evidence adopts the word, mixed evidence is a conflict of synonyms (COS),
//! and no evidence sends it to human review (OOV).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;

use thiserror::Error;

use crate::eval::Topic;
use crate::lexicon::{token_counts, LexiconEntry, LexiconError, Polarity, SentimentLexicon};
use crate::preprocess::{
    normalize_text, pos_tag, remove_stopwords, segment, PosTag, PosTagger, PreprocessError,
    Sentence, StopWords,
};

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("invalid polarity {0:?}: expected PO or NG")]
    InvalidPolarity(String),
    #[error("review item {0:?} is not pending")]
    NotPending(String),
    #[error(transparent)]
    Preprocess(#[from] PreprocessError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A lookup failure. Transient: the word is skipped, not prevent-listed.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("provider failed for {word:?}: {reason}")]
pub struct ProviderError {
    pub word: String,
    pub reason: String,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExpansionError + '_ {
    move |source| ExpansionError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub word: String,
    pub tag: PosTag,
    pub source_topic_id: String,
}

/// A POS-tagged sentence together with the topic it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    pub topic_id: String,
    pub sentence: Sentence,
}

/// Splits, filters and tags every topic in `corpus`.
pub fn tag_corpus(
    corpus: &[Topic],
    stopwords: &StopWords,
    tagger: &dyn PosTagger,
) -> Result<Vec<TaggedSentence>, PreprocessError> {
    let mut out = Vec::new();
    for topic in corpus {
        for s in segment(&topic.text) {
            let sentence = pos_tag(&remove_stopwords(&s, stopwords), tagger)?;
            out.push(TaggedSentence {
                topic_id: topic.id.clone(),
                sentence,
            });
        }
    }
    Ok(out)
}

/// Distinct content-word tokens that the lexicon neither contains nor
/// prevents, in order of first occurrence.
pub fn filter_candidates(tagged: &[TaggedSentence], lex: &SentimentLexicon) -> Vec<Candidate> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for ts in tagged {
        for t in &ts.sentence.tokens {
            if !t.tag.is_content()
                || t.is_mask()
                || lex.contains(&t.surface)
                || lex.is_prevented(&t.surface)
            {
                continue;
            }
            if seen.insert(t.surface.clone()) {
                out.push(Candidate {
                    word: t.surface.clone(),
                    tag: t.tag,
                    source_topic_id: ts.topic_id.clone(),
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynsetResult {
    pub translation: Option<String>,
    /// `(arabic word, optional english gloss)`
    pub synonyms: Vec<(String, Option<String>)>,
    pub antonyms: Vec<(String, Option<String>)>,
}

impl SynsetResult {
    pub fn is_empty(&self) -> bool {
        self.translation.is_none() && self.synonyms.is_empty() && self.antonyms.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Synonym,
    Antonym,
}

/// One lexicon-backed vote. `polarity` is already flipped for antonyms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    pub word: String,
    pub relation: Relation,
    pub polarity: Polarity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Adopt(Polarity),
    Cos,
    Oov,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationDecision {
    pub outcome: Outcome,
    pub evidence: Vec<Evidence>,
}

/// Decides a word's orientation from its synset.
///
/// Only synonyms and antonyms with PO or NG lexicon entries vote. No votes
/// means OOV, unanimous votes adopt, anything else is COS.
pub fn detect_orientation(
    word: &str,
    syn: &SynsetResult,
    lex: &SentimentLexicon,
) -> OrientationDecision {
    let word = normalize_text(word);
    let related = syn
        .synonyms
        .iter()
        .map(|(w, _)| (w, Relation::Synonym))
        .chain(syn.antonyms.iter().map(|(w, _)| (w, Relation::Antonym)));
    let mut evidence = Vec::new();
    for (w, relation) in related {
        let Some((p, entry)) = lex.lookup(w) else {
            continue;
        };
        if p == Polarity::Nu || entry.word == word {
            continue;
        }
        let polarity = match relation {
            Relation::Synonym => p,
            Relation::Antonym => p.flip(),
        };
        evidence.push(Evidence {
            word: entry.word.clone(),
            relation,
            polarity,
        });
    }
    let outcome = match evidence.first() {
        None => Outcome::Oov,
        Some(e) if evidence.iter().all(|x| x.polarity == e.polarity) => Outcome::Adopt(e.polarity),
        Some(_) => Outcome::Cos,
    };
    OrientationDecision { outcome, evidence }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReviewStatus {
    Pending,
    Accepted(Polarity),
    Rejected,
}

impl fmt::Display for ReviewStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReviewStatus::Pending => f.write_str("PENDING"),
            ReviewStatus::Accepted(p) => write!(f, "ACCEPTED:{p}"),
            ReviewStatus::Rejected => f.write_str("REJECTED"),
        }
    }
}

impl FromStr for ReviewStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "PENDING" => Ok(ReviewStatus::Pending),
            "REJECTED" => Ok(ReviewStatus::Rejected),
            _ => match s.strip_prefix("ACCEPTED:").map(str::parse) {
                Some(Ok(p @ (Polarity::Po | Polarity::Ng))) => Ok(ReviewStatus::Accepted(p)),
                _ => Err(format!("invalid review status {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewItem {
    pub word: String,
    pub suggested: Option<Polarity>,
    pub status: ReviewStatus,
}

impl ReviewItem {
    pub fn pending(word: &str) -> Self {
        ReviewItem {
            word: normalize_text(word),
            suggested: None,
            status: ReviewStatus::Pending,
        }
    }
}

/// An operator's reply to a review prompt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorAnswer {
    Accept(Polarity),
    Reject,
    Skip,
}

impl FromStr for OperatorAnswer {
    type Err = ExpansionError;

    /// Accepts `p`/`PO`, `n`/`NG`, `r`/`reject` and `s`/`skip`, in any case.
    fn from_str(s: &str) -> Result<Self, ExpansionError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p" | "po" => Ok(OperatorAnswer::Accept(Polarity::Po)),
            "n" | "ng" => Ok(OperatorAnswer::Accept(Polarity::Ng)),
            "r" | "reject" => Ok(OperatorAnswer::Reject),
            "s" | "skip" => Ok(OperatorAnswer::Skip),
            _ => Err(ExpansionError::InvalidPolarity(s.trim().to_owned())),
        }
    }
}

/// A lexicon change produced by a review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconDelta {
    Insert(LexiconEntry),
    Prevent(String),
    Unchanged,
}

impl LexiconDelta {
    pub fn apply(&self, lex: &mut SentimentLexicon) -> Result<(), LexiconError> {
        match self {
            LexiconDelta::Insert(e) => lex.insert(e.clone()),
            LexiconDelta::Prevent(w) => lex.prevent(w).map(|_| ()),
            LexiconDelta::Unchanged => Ok(()),
        }
    }
}

/// Turns an operator answer into a lexicon change. `None` (batch mode) and
/// `Skip` leave the item pending.
pub fn resolve_oov(
    item: &ReviewItem,
    answer: Option<OperatorAnswer>,
    tf: u64,
) -> Result<(ReviewItem, LexiconDelta), ExpansionError> {
    if item.status != ReviewStatus::Pending {
        return Err(ExpansionError::NotPending(item.word.clone()));
    }
    let mut out = item.clone();
    let delta = match answer {
        Some(OperatorAnswer::Accept(p @ (Polarity::Po | Polarity::Ng))) => {
            out.status = ReviewStatus::Accepted(p);
            let mut entry = LexiconEntry::new(&item.word, p);
            entry.tf = tf;
            LexiconDelta::Insert(entry)
        }
        Some(OperatorAnswer::Accept(p)) => {
            return Err(ExpansionError::InvalidPolarity(p.to_string()));
        }
        Some(OperatorAnswer::Reject) => {
            out.status = ReviewStatus::Rejected;
            LexiconDelta::Prevent(item.word.clone())
        }
        Some(OperatorAnswer::Skip) | None => LexiconDelta::Unchanged,
    };
    Ok((out, delta))
}

pub trait SynsetProvider {
    fn fetch(&self, word: &str) -> Result<SynsetResult, ProviderError>;
}

/// Provider backed by a TSV file:
/// `word<TAB>translation<TAB>syn1,syn2,...<TAB>ant1,ant2,...`.
///
/// A related word may carry a gloss as `word:gloss`. Unknown words get an
/// empty result.
#[derive(Debug, Clone, Default)]
pub struct FixtureProvider {
    entries: HashMap<String, SynsetResult>,
}

fn parse_related(field: &str) -> Vec<(String, Option<String>)> {
    field
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| match s.split_once(':') {
            Some((w, g)) => (
                normalize_text(w),
                Some(g.trim().to_owned()).filter(|g| !g.is_empty()),
            ),
            None => (normalize_text(s), None),
        })
        .filter(|(w, _)| !w.is_empty())
        .collect()
}

fn render_related(words: &[(String, Option<String>)]) -> String {
    words
        .iter()
        .map(|(w, g)| match g {
            Some(g) => format!("{w}:{g}"),
            None => w.clone(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

impl FixtureProvider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, word: &str, result: SynsetResult) {
        self.entries.insert(normalize_text(word), result);
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExpansionError> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(io_err(path))?;
        Self::from_reader(BufReader::new(file), &path.display().to_string())
    }

    pub fn from_reader(reader: impl BufRead, name: &str) -> Result<Self, ExpansionError> {
        let mut p = FixtureProvider::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| ExpansionError::Io {
                path: name.to_owned(),
                source,
            })?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() > 4 {
                return Err(ExpansionError::Parse {
                    path: name.to_owned(),
                    line: idx + 1,
                    reason: format!("expected at most 4 columns, got {}", cols.len()),
                });
            }
            let word = normalize_text(cols[0]);
            if word.is_empty() {
                return Err(ExpansionError::Parse {
                    path: name.to_owned(),
                    line: idx + 1,
                    reason: "empty word".into(),
                });
            }
            let col = |i: usize| cols.get(i).copied().unwrap_or("");
            let translation = Some(col(1).trim().to_owned()).filter(|t| !t.is_empty());
            p.entries.insert(
                word,
                SynsetResult {
                    translation,
                    synonyms: parse_related(col(2)),
                    antonyms: parse_related(col(3)),
                },
            );
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl SynsetProvider for FixtureProvider {
    fn fetch(&self, word: &str) -> Result<SynsetResult, ProviderError> {
        Ok(self
            .entries
            .get(&normalize_text(word))
            .cloned()
            .unwrap_or_default())
    }
}

/// Remembers another provider's answers in a file using the fixture format.
/// Errors are not cached.
pub struct CachedProvider<P> {
    inner: P,
    path: PathBuf,
    cache: Mutex<HashMap<String, SynsetResult>>,
}

impl<P: SynsetProvider> CachedProvider<P> {
    pub fn open(inner: P, path: impl Into<PathBuf>) -> Result<Self, ExpansionError> {
        let path = path.into();
        let cache = if path.exists() {
            FixtureProvider::load(&path)?.entries
        } else {
            HashMap::new()
        };
        Ok(CachedProvider {
            inner,
            path,
            cache: Mutex::new(cache),
        })
    }

    pub fn cached_len(&self) -> usize {
        self.cache.lock().map(|c| c.len()).unwrap_or(0)
    }
}

impl<P: SynsetProvider> SynsetProvider for CachedProvider<P> {
    fn fetch(&self, word: &str) -> Result<SynsetResult, ProviderError> {
        let key = normalize_text(word);
        let mut cache = self.cache.lock().map_err(|_| ProviderError {
            word: key.clone(),
            reason: "cache lock poisoned".into(),
        })?;
        if let Some(hit) = cache.get(&key) {
            return Ok(hit.clone());
        }
        let result = self.inner.fetch(&key)?;
        let line = format!(
            "{}\t{}\t{}\t{}\n",
            key,
            result
                .translation
                .as_deref()
                .unwrap_or("")
                .replace(['\t', '\n'], " "),
            render_related(&result.synonyms),
            render_related(&result.antonyms),
        );
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(|e| ProviderError {
                word: key.clone(),
                reason: format!("cache write failed: {e}"),
            })?;
        cache.insert(key, result.clone());
        Ok(result)
    }
}

/// Append-only TSV of review items: `word<TAB>suggested<TAB>status`.
#[derive(Debug, Clone)]
pub struct PendingReviewLog {
    path: PathBuf,
}

impl PendingReviewLog {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        PendingReviewLog { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Reads all items; a missing file is an empty log.
    pub fn load(&self) -> Result<Vec<ReviewItem>, ExpansionError> {
        if !self.path.exists() {
            return Ok(Vec::new());
        }
        let text = fs::read_to_string(&self.path).map_err(io_err(&self.path))?;
        let name = self.path.display().to_string();
        let mut out = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parse = || -> Result<ReviewItem, String> {
                let cols: Vec<&str> = line.split('\t').collect();
                let [word, suggested, status] = cols[..] else {
                    return Err(format!("expected 3 columns, got {}", cols.len()));
                };
                let suggested = match suggested {
                    "-" | "" => None,
                    s => Some(s.parse::<Polarity>().map_err(|e| e.to_string())?),
                };
                Ok(ReviewItem {
                    word: word.to_owned(),
                    suggested,
                    status: status.parse()?,
                })
            };
            out.push(parse().map_err(|reason| ExpansionError::Parse {
                path: name.clone(),
                line: idx + 1,
                reason,
            })?);
        }
        Ok(out)
    }

    /// Appends `item` unless the log already holds a pending entry for the
    /// same word. Each item is a single `write` on an append-mode handle.
    pub fn append(&self, item: &ReviewItem) -> Result<bool, ExpansionError> {
        if item.status == ReviewStatus::Pending
            && self
                .load()?
                .iter()
                .any(|x| x.word == item.word && x.status == ReviewStatus::Pending)
        {
            return Ok(false);
        }
        let suggested = item.suggested.map_or("-".to_owned(), |p| p.to_string());
        let line = format!("{}\t{}\t{}\n", item.word, suggested, item.status);
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .and_then(|mut f| f.write_all(line.as_bytes()))
            .map_err(io_err(&self.path))?;
        Ok(true)
    }
}

/// Interactive OOV resolution.
pub trait Reviewer {
    fn review(&mut self, item: &ReviewItem, syn: &SynsetResult) -> OperatorAnswer;
}

/// How OOV words are handled.
pub enum ExpansionMode<'a> {
    /// OOV words stay pending and are appended to the log, if one is given.
    Batch {
        pending: Option<&'a PendingReviewLog>,
    },
    /// Each OOV word is put to the reviewer. Skipped words go to the log.
    Interactive {
        reviewer: &'a mut dyn Reviewer,
        pending: Option<&'a PendingReviewLog>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpansionReport {
    pub adopted: Vec<(String, Polarity)>,
    pub cos: Vec<String>,
    pub oov_pending: Vec<String>,
    pub oov_accepted: Vec<(String, Polarity)>,
    pub oov_rejected: Vec<String>,
    pub provider_errors: Vec<ProviderError>,
}

impl ExpansionReport {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

impl fmt::Display for ExpansionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "adopted\t{}", self.adopted.len())?;
        writeln!(f, "cos\t{}", self.cos.len())?;
        writeln!(f, "oov_pending\t{}", self.oov_pending.len())?;
        writeln!(f, "oov_accepted\t{}", self.oov_accepted.len())?;
        writeln!(f, "oov_rejected\t{}", self.oov_rejected.len())?;
        write!(f, "provider_errors\t{}", self.provider_errors.len())
    }
}

/// Text-processing resources needed to find candidates.
#[derive(Clone, Copy)]
pub struct CandidateSource<'a> {
    pub stopwords: &'a StopWords,
    pub tagger: &'a dyn PosTagger,
}

/// Grows `lex` from the words of `corpus`.
///
/// Candidates are processed one at a time in first-occurrence order. Adopted
/// words are inserted immediately and can serve as evidence for later
/// candidates.
pub fn expand_lexicon(
    corpus: &[Topic],
    lex: &SentimentLexicon,
    provider: &dyn SynsetProvider,
    mut mode: ExpansionMode<'_>,
    source: CandidateSource<'_>,
) -> Result<(SentimentLexicon, ExpansionReport), ExpansionError> {
    let tagged = tag_corpus(corpus, source.stopwords, source.tagger)?;
    let candidates = filter_candidates(&tagged, lex);
    let tf = token_counts(corpus);
    let mut lex = lex.clone();
    let mut report = ExpansionReport::default();

    for c in candidates {
        let syn = match provider.fetch(&c.word) {
            Ok(s) => s,
            Err(e) => {
                report.provider_errors.push(e);
                continue;
            }
        };
        let decision = detect_orientation(&c.word, &syn, &lex);
        match decision.outcome {
            Outcome::Adopt(p) => {
                let mut entry = LexiconEntry::new(&c.word, p);
                entry.gloss = syn.translation.clone().unwrap_or_default();
                entry.tf = tf.get(&c.word).copied().unwrap_or(0);
                lex.insert(entry)?;
                report.adopted.push((c.word, p));
            }
            Outcome::Cos => report.cos.push(c.word),
            Outcome::Oov => {
                let item = ReviewItem::pending(&c.word);
                let (answer, pending) = match &mut mode {
                    ExpansionMode::Batch { pending } => (None, *pending),
                    ExpansionMode::Interactive { reviewer, pending } => {
                        (Some(reviewer.review(&item, &syn)), *pending)
                    }
                };
                let word_tf = tf.get(&c.word).copied().unwrap_or(0);
                let (item, delta) = resolve_oov(&item, answer, word_tf)?;
                delta.apply(&mut lex)?;
                match item.status {
                    ReviewStatus::Accepted(p) => report.oov_accepted.push((c.word, p)),
                    ReviewStatus::Rejected => report.oov_rejected.push(c.word),
                    ReviewStatus::Pending => {
                        if let Some(log) = pending {
                            log.append(&item)?;
                        }
                        report.oov_pending.push(c.word);
                    }
                }
            }
        }
    }
    Ok((lex, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::TableTagger;
    use proptest::prelude::*;

    const FIXTURE: &str = "\
مسرور\tDelighted\tفرحان:Pleased,سعيد:Happy,مبتهج:Glad\t
شديد\tIntense\tقوي:strong,عنيف:violent,حاد:keen\t
";

    fn base_lexicon() -> SentimentLexicon {
        let mut lex = SentimentLexicon::new();
        for (w, p) in [
            ("فرحان", Polarity::Po),
            ("سعيد", Polarity::Po),
            ("مبتهج", Polarity::Po),
            ("قوي", Polarity::Po),
            ("عنيف", Polarity::Ng),
            ("حاد", Polarity::Po),
        ] {
            lex.insert(LexiconEntry::new(w, p)).unwrap();
        }
        lex
    }

    fn tagger() -> TableTagger {
        TableTagger::new(
            ["مسرور", "شديد", "هايف"]
                .into_iter()
                .map(|w| (w.to_string(), PosTag::JJ))
                .collect(),
        )
    }

    fn corpus() -> Vec<Topic> {
        vec![
            Topic::new("t1", "الولد مسرور"),
            Topic::new("t2", "البرد شديد"),
            Topic::new("t3", "الفيلم هايف هايف"),
        ]
    }

    struct Scripted(Vec<OperatorAnswer>);

    impl Reviewer for Scripted {
        fn review(&mut self, _: &ReviewItem, _: &SynsetResult) -> OperatorAnswer {
            self.0.remove(0)
        }
    }

    fn run(lex: &SentimentLexicon, mode: ExpansionMode<'_>) -> (SentimentLexicon, ExpansionReport) {
        let provider = FixtureProvider::from_reader(FIXTURE.as_bytes(), "fixture").unwrap();
        let stop = StopWords::new();
        let tagger = tagger();
        let source = CandidateSource {
            stopwords: &stop,
            tagger: &tagger,
        };
        expand_lexicon(&corpus(), lex, &provider, mode, source).unwrap()
    }

    #[test]
    fn three_cases_in_batch_mode() {
        let dir = tempfile::tempdir().unwrap();
        let log = PendingReviewLog::new(dir.path().join("pending.tsv"));
        let (lex, report) = run(
            &base_lexicon(),
            ExpansionMode::Batch {
                pending: Some(&log),
            },
        );
        assert_eq!(report.adopted, vec![("مسرور".to_string(), Polarity::Po)]);
        assert_eq!(report.cos, vec!["شديد"]);
        assert_eq!(report.oov_pending, vec!["هايف"]);
        let e = lex.get("مسرور").unwrap();
        assert_eq!(
            (e.polarity, e.gloss.as_str(), e.tf),
            (Polarity::Po, "Delighted", 1)
        );
        assert!(!lex.contains("شديد"));
        assert!(!lex.contains("هايف"));
        assert_eq!(log.load().unwrap(), vec![ReviewItem::pending("هايف")]);
        // a rerun neither adopts again nor duplicates the pending entry
        let (again, report) = run(
            &lex,
            ExpansionMode::Batch {
                pending: Some(&log),
            },
        );
        assert!(report.adopted.is_empty());
        assert_eq!(again, lex);
        assert_eq!(log.load().unwrap().len(), 1);
    }

    #[test]
    fn interactive_accept_and_reject() {
        let mut reviewer = Scripted(vec![OperatorAnswer::Accept(Polarity::Ng)]);
        let mode = ExpansionMode::Interactive {
            reviewer: &mut reviewer,
            pending: None,
        };
        let (lex, report) = run(&base_lexicon(), mode);
        assert_eq!(
            report.oov_accepted,
            vec![("هايف".to_string(), Polarity::Ng)]
        );
        let e = lex.get("هايف").unwrap();
        assert_eq!((e.polarity, e.tf, e.gloss.as_str()), (Polarity::Ng, 2, ""));

        let mut reviewer = Scripted(vec![OperatorAnswer::Reject]);
        let mode = ExpansionMode::Interactive {
            reviewer: &mut reviewer,
            pending: None,
        };
        let (lex, report) = run(&base_lexicon(), mode);
        assert_eq!(report.oov_rejected, vec!["هايف"]);
        assert!(lex.is_prevented("هايف"));
        assert!(!lex.contains("هايف"));
        // prevent-listed words are not proposed again
        let (_, report) = run(&lex, ExpansionMode::Batch { pending: None });
        assert!(report.oov_pending.is_empty() && report.oov_rejected.is_empty());
    }

    #[test]
    fn nothing_to_do() {
        let mut lex = base_lexicon();
        lex.insert(LexiconEntry::new("مسرور", Polarity::Po))
            .unwrap();
        let provider = FixtureProvider::new();
        let stop = StopWords::new();
        let tagger = tagger();
        let (out, report) = expand_lexicon(
            &[Topic::new("a", "مسرور")],
            &lex,
            &provider,
            ExpansionMode::Batch { pending: None },
            CandidateSource {
                stopwords: &stop,
                tagger: &tagger,
            },
        )
        .unwrap();
        assert!(report.is_empty());
        assert_eq!(out, lex);
    }

    struct Failing;

    impl SynsetProvider for Failing {
        fn fetch(&self, word: &str) -> Result<SynsetResult, ProviderError> {
            Err(ProviderError {
                word: word.to_owned(),
                reason: "offline".into(),
            })
        }
    }

    #[test]
    fn provider_errors_are_skipped() {
        let stop = StopWords::new();
        let tagger = tagger();
        let (lex, report) = expand_lexicon(
            &corpus(),
            &base_lexicon(),
            &Failing,
            ExpansionMode::Batch { pending: None },
            CandidateSource {
                stopwords: &stop,
                tagger: &tagger,
            },
        )
        .unwrap();
        assert_eq!(report.provider_errors.len(), 3);
        assert_eq!(lex, base_lexicon());
        assert_eq!(lex.prevent_list().count(), 0);
    }

    #[test]
    fn candidate_filtering() {
        let mut lex = base_lexicon();
        lex.insert(LexiconEntry::new("مسرور", Polarity::Po))
            .unwrap();
        lex.prevent("كلام").unwrap();
        let mut table: HashMap<String, PosTag> = HashMap::new();
        for w in ["مسرور", "هايف", "كلام"] {
            table.insert(w.into(), PosTag::JJ);
        }
        table.insert("ده".into(), PosTag::Other);
        let tagger = TableTagger::new(table);
        let corpus = vec![
            Topic::new("a", "ده مسرور هايف كلام"),
            Topic::new("b", "هايف هايف هايف هايف"),
        ];
        let tagged = tag_corpus(&corpus, &StopWords::new(), &tagger).unwrap();
        let c = filter_candidates(&tagged, &lex);
        assert_eq!(
            c,
            vec![Candidate {
                word: "هايف".into(),
                tag: PosTag::JJ,
                source_topic_id: "a".into()
            }]
        );
    }

    #[test]
    fn orientation_cases() {
        let lex = base_lexicon();
        let provider = FixtureProvider::from_reader(FIXTURE.as_bytes(), "f").unwrap();
        let d = detect_orientation("مسرور", &provider.fetch("مسرور").unwrap(), &lex);
        assert_eq!(d.outcome, Outcome::Adopt(Polarity::Po));
        assert_eq!(d.evidence.len(), 3);
        let d = detect_orientation("شديد", &provider.fetch("شديد").unwrap(), &lex);
        assert_eq!(d.outcome, Outcome::Cos);
        let d = detect_orientation("هايف", &provider.fetch("هايف").unwrap(), &lex);
        assert_eq!(d.outcome, Outcome::Oov);
        assert!(d.evidence.is_empty());
    }

    #[test]
    fn antonyms_vote_flipped() {
        let lex = base_lexicon();
        let syn = SynsetResult {
            translation: Some("sad".into()),
            synonyms: vec![],
            antonyms: vec![("سعيد".into(), None), ("فرحان".into(), None)],
        };
        assert_eq!(
            detect_orientation("حزين", &syn, &lex).outcome,
            Outcome::Adopt(Polarity::Ng)
        );
    }

    #[test]
    fn neutral_and_unknown_synonyms_do_not_vote() {
        let mut lex = base_lexicon();
        lex.insert(LexiconEntry::new("عادي", Polarity::Nu)).unwrap();
        let syn = SynsetResult {
            translation: Some("x".into()),
            synonyms: vec![("عادي".into(), None), ("مجهول".into(), None)],
            antonyms: vec![],
        };
        assert_eq!(detect_orientation("كلمة", &syn, &lex).outcome, Outcome::Oov);
        let syn = SynsetResult {
            synonyms: vec![("عادي".into(), None), ("سعيد".into(), None)],
            ..syn
        };
        assert_eq!(
            detect_orientation("كلمة", &syn, &lex).outcome,
            Outcome::Adopt(Polarity::Po)
        );
    }

    #[test]
    fn operator_answers() {
        assert_eq!(
            "p".parse::<OperatorAnswer>().unwrap(),
            OperatorAnswer::Accept(Polarity::Po)
        );
        assert_eq!(
            "NG".parse::<OperatorAnswer>().unwrap(),
            OperatorAnswer::Accept(Polarity::Ng)
        );
        assert_eq!(
            "r".parse::<OperatorAnswer>().unwrap(),
            OperatorAnswer::Reject
        );
        assert_eq!(
            " s ".parse::<OperatorAnswer>().unwrap(),
            OperatorAnswer::Skip
        );
        for bad in ["NU", "x", ""] {
            assert!(matches!(
                bad.parse::<OperatorAnswer>(),
                Err(ExpansionError::InvalidPolarity(_))
            ));
        }
    }

    #[test]
    fn resolve_oov_paths() {
        let item = ReviewItem::pending("هايف");
        let (out, delta) =
            resolve_oov(&item, Some(OperatorAnswer::Accept(Polarity::Ng)), 4).unwrap();
        assert_eq!(out.status, ReviewStatus::Accepted(Polarity::Ng));
        let mut expected = LexiconEntry::new("هايف", Polarity::Ng);
        expected.tf = 4;
        assert_eq!(delta, LexiconDelta::Insert(expected));
        let (_, delta) = resolve_oov(&item, Some(OperatorAnswer::Reject), 4).unwrap();
        assert_eq!(delta, LexiconDelta::Prevent("هايف".into()));
        let (same, delta) = resolve_oov(&item, None, 4).unwrap();
        assert_eq!((same, delta), (item.clone(), LexiconDelta::Unchanged));
        assert!(matches!(
            resolve_oov(&item, Some(OperatorAnswer::Accept(Polarity::Nu)), 1),
            Err(ExpansionError::InvalidPolarity(_))
        ));
        assert!(matches!(
            resolve_oov(&out, None, 1),
            Err(ExpansionError::NotPending(_))
        ));
    }

    #[test]
    fn review_status_round_trip() {
        for s in [
            ReviewStatus::Pending,
            ReviewStatus::Rejected,
            ReviewStatus::Accepted(Polarity::Po),
            ReviewStatus::Accepted(Polarity::Ng),
        ] {
            assert_eq!(s.to_string().parse::<ReviewStatus>().unwrap(), s);
        }
        assert!("ACCEPTED:NU".parse::<ReviewStatus>().is_err());
    }

    #[test]
    fn cached_provider_persists_answers() {
        let dir = tempfile::tempdir().unwrap();
        let cache_path = dir.path().join("cache.tsv");
        let inner = FixtureProvider::from_reader(FIXTURE.as_bytes(), "f").unwrap();
        let cached = CachedProvider::open(inner, &cache_path).unwrap();
        let first = cached.fetch("مسرور").unwrap();
        cached.fetch("هايف").unwrap();
        assert_eq!(cached.cached_len(), 2);
        let reopened = CachedProvider::open(FixtureProvider::new(), &cache_path).unwrap();
        assert_eq!(reopened.fetch("مسرور").unwrap(), first);
        assert_eq!(reopened.fetch("هايف").unwrap(), SynsetResult::default());
    }

    fn polarity() -> impl Strategy<Value = Polarity> {
        prop_oneof![Just(Polarity::Po), Just(Polarity::Ng)]
    }

    proptest! {
        #[test]
        fn antonym_flip_equivalence(
            votes in prop::collection::vec((polarity(), any::<bool>()), 0..8),
            swap in any::<prop::sample::Index>(),
        ) {
            let mut lex = SentimentLexicon::new();
            let mut syn = SynsetResult { translation: Some("t".into()), ..Default::default() };
            for (i, (p, is_antonym)) in votes.iter().enumerate() {
                let word = format!("كلمة{}", "ب".repeat(i + 1));
                lex.insert(LexiconEntry::new(&word, *p)).unwrap();
                if *is_antonym {
                    syn.antonyms.push((normalize_text(&word), None));
                } else {
                    syn.synonyms.push((normalize_text(&word), None));
                }
            }
            let before = detect_orientation("هدف", &syn, &lex).outcome;
            prop_assert!(before != Outcome::Adopt(Polarity::Nu));
            if syn.antonyms.is_empty() {
                return Ok(());
            }
            // replace one antonym (w, p) by a synonym (w', flip p)
            let k = swap.index(syn.antonyms.len());
            let (w, _) = syn.antonyms.remove(k);
            let p = lex.get(&w).unwrap().polarity;
            let replacement = format!("{w}ت");
            lex.insert(LexiconEntry::new(&replacement, p.flip())).unwrap();
            syn.synonyms.push((replacement, None));
            prop_assert_eq!(detect_orientation("هدف", &syn, &lex).outcome, before);
        }
    }
}
