//! Sentiment word lexicon, prevent list and idiom phrase lexicon.
//!
//! The word lexicon is a five-column TSV (`word gloss translit polarity tf`)
//! with a header line. The prevent list, words an operator confirmed carry
//! no sentiment, lives in a sidecar file with the `.prevent` extension next
//! to the lexicon. Idioms are a 2-3 column TSV (`phrase polarity gloss?`).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::Topic;
use crate::preprocess::{normalize_text, segment};

pub const LEXICON_HEADER: &str = "word\tgloss\ttranslit\tpolarity\ttf";

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}:{line}: {reason}")]
    Parse {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: duplicate word {word:?}")]
    DuplicateWord {
        path: String,
        line: usize,
        word: String,
    },
    #[error("{path}:{line}: duplicate phrase {phrase:?}")]
    DuplicatePhrase {
        path: String,
        line: usize,
        phrase: String,
    },
    #[error("word {0:?} is already in the lexicon")]
    AlreadyInLexicon(String),
    #[error("word {0:?} is both a lexicon entry and prevent-listed")]
    PreventConflict(String),
    #[error("invalid idiom: {0}")]
    InvalidIdiom(String),
    #[error("{0:?} normalizes to an empty word")]
    EmptyWord(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> LexiconError + '_ {
    move |source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "PO")]
    Po,
    #[serde(rename = "NG")]
    Ng,
    #[serde(rename = "NU")]
    Nu,
}

impl Polarity {
    /// PO ↔ NG; NU is its own opposite.
    pub fn flip(self) -> Self {
        match self {
            Polarity::Po => Polarity::Ng,
            Polarity::Ng => Polarity::Po,
            Polarity::Nu => Polarity::Nu,
        }
    }

    /// +1, -1 or 0.
    pub fn sign(self) -> i8 {
        match self {
            Polarity::Po => 1,
            Polarity::Ng => -1,
            Polarity::Nu => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Po => "PO",
            Polarity::Ng => "NG",
            Polarity::Nu => "NU",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "PO" => Ok(Polarity::Po),
            "NG" => Ok(Polarity::Ng),
            "NU" => Ok(Polarity::Nu),
            other => Err(format!("polarity must be PO, NG or NU, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub word: String,
    /// English gloss; empty for most dialect words.
    pub gloss: String,
    /// Buckwalter transliteration.
    pub translit: String,
    pub polarity: Polarity,
    /// Corpus term frequency.
    pub tf: u64,
}

impl LexiconEntry {
    pub fn new(word: &str, polarity: Polarity) -> Self {
        LexiconEntry {
            word: normalize_text(word),
            gloss: String::new(),
            translit: String::new(),
            polarity,
            tf: 0,
        }
    }

    pub fn with_gloss(mut self, gloss: impl Into<String>) -> Self {
        self.gloss = gloss.into();
        self
    }
}

/// Number of entries per polarity class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub po: usize,
    pub ng: usize,
    pub nu: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.po + self.ng + self.nu
    }
}

/// Word lexicon plus prevent list; the two key sets are always disjoint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, LexiconEntry>,
    prevent: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry, normalizing its word. Inserting a prevent-listed word
    /// removes it from the prevent list.
    pub fn insert(&mut self, mut entry: LexiconEntry) -> Result<(), LexiconError> {
        let raw = std::mem::take(&mut entry.word);
        entry.word = normalize_text(&raw);
        if entry.word.is_empty() {
            return Err(LexiconError::EmptyWord(raw));
        }
        if self.entries.contains_key(&entry.word) {
            return Err(LexiconError::AlreadyInLexicon(entry.word));
        }
        self.prevent.remove(&entry.word);
        self.entries.insert(entry.word.clone(), entry);
        Ok(())
    }

    /// Adds a word to the prevent list. Returns `false` if it was already there.
    pub fn prevent(&mut self, word: &str) -> Result<bool, LexiconError> {
        let word = normalize_text(word);
        if self.entries.contains_key(&word) {
            return Err(LexiconError::AlreadyInLexicon(word));
        }
        Ok(self.prevent.insert(word))
    }

    /// Exact lookup of an already-normalized word.
    pub fn get(&self, normalized: &str) -> Option<&LexiconEntry> {
        self.entries.get(normalized)
    }

    /// Normalizes `word` and looks it up.
    pub fn lookup(&self, word: &str) -> Option<(Polarity, &LexiconEntry)> {
        self.entries
            .get(&normalize_text(word))
            .map(|e| (e.polarity, e))
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.entries.contains_key(normalized)
    }

    pub fn is_prevented(&self, normalized: &str) -> bool {
        self.prevent.contains(normalized)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn prevent_list(&self) -> impl Iterator<Item = &str> {
        self.prevent.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn class_counts(&self) -> ClassCounts {
        let mut counts = ClassCounts::default();
        for e in self.entries.values() {
            match e.polarity {
                Polarity::Po => counts.po += 1,
                Polarity::Ng => counts.ng += 1,
                Polarity::Nu => counts.nu += 1,
            }
        }
        counts
    }

    /// Loads `path` and, when present, its `.prevent` sidecar.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(io_err(path))?;
        let mut lex = Self::from_reader(BufReader::new(file), &path.display().to_string())?;
        let sidecar = prevent_path(path);
        if sidecar.exists() {
            let text = fs::read_to_string(&sidecar).map_err(io_err(&sidecar))?;
            for word in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                let word = normalize_text(word);
                if lex.entries.contains_key(&word) {
                    return Err(LexiconError::PreventConflict(word));
                }
                lex.prevent.insert(word);
            }
        }
        Ok(lex)
    }

    pub fn from_reader(reader: impl BufRead, name: &str) -> Result<Self, LexiconError> {
        let mut lex = SentimentLexicon::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| LexiconError::Io {
                path: name.to_owned(),
                source,
            })?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || (i == 0 && line.starts_with("word\t")) {
                continue;
            }
            let parse_err = |reason: String| LexiconError::Parse {
                path: name.to_owned(),
                line: i + 1,
                reason,
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(parse_err(format!(
                    "expected 5 columns, found {}",
                    cols.len()
                )));
            }
            let word = normalize_text(cols[0]);
            if word.is_empty() {
                return Err(parse_err(format!(
                    "{:?} normalizes to an empty word",
                    cols[0]
                )));
            }
            let polarity = cols[3].parse::<Polarity>().map_err(parse_err)?;
            let tf = cols[4]
                .trim()
                .parse::<u64>()
                .map_err(|e| parse_err(format!("bad term frequency {:?}: {e}", cols[4])))?;
            if lex.entries.contains_key(&word) {
                return Err(LexiconError::DuplicateWord {
                    path: name.to_owned(),
                    line: i + 1,
                    word,
                });
            }
            lex.entries.insert(
                word.clone(),
                LexiconEntry {
                    word,
                    gloss: cols[1].to_owned(),
                    translit: cols[2].to_owned(),
                    polarity,
                    tf,
                },
            );
        }
        Ok(lex)
    }

    /// Writes the lexicon TSV and its `.prevent` sidecar. Tabs and line breaks
    /// inside gloss or transliteration are replaced by spaces.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LexiconError> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(io_err(path))?;
        let mut out = BufWriter::new(file);
        self.write_to(&mut out).map_err(io_err(path))?;
        out.flush().map_err(io_err(path))?;

        let sidecar = prevent_path(path);
        let mut body = String::new();
        for word in &self.prevent {
            body.push_str(word);
            body.push('\n');
        }
        fs::write(&sidecar, body).map_err(io_err(&sidecar))
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{LEXICON_HEADER}")?;
        for e in self.entries.values() {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                e.word,
                escape_field(&e.gloss),
                escape_field(&e.translit),
                e.polarity,
                e.tf
            )?;
        }
        Ok(())
    }
}

fn escape_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

/// `lexicon.tsv` → `lexicon.prevent`.
pub fn prevent_path(lexicon_path: &Path) -> PathBuf {
    lexicon_path.with_extension("prevent")
}

/// Occurrence count of every normalized token across the corpus.
pub fn token_counts(corpus: &[Topic]) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    for topic in corpus {
        for sentence in segment(&topic.text) {
            for token in sentence.tokens {
                *counts.entry(token.surface).or_insert(0) += 1;
            }
        }
    }
    counts
}

/// Returns a copy of `lex` whose `tf` column is recomputed from `corpus`.
pub fn update_term_frequencies(lex: &SentimentLexicon, corpus: &[Topic]) -> SentimentLexicon {
    let counts = token_counts(corpus);
    let mut out = lex.clone();
    for entry in out.entries.values_mut() {
        entry.tf = counts.get(&entry.word).copied().unwrap_or(0);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdiomEntry {
    /// Normalized tokens, at least two.
    pub phrase: Vec<String>,
    /// PO or NG.
    pub polarity: Polarity,
    pub gloss: Option<String>,
}

impl IdiomEntry {
    pub fn new(phrase: &str, polarity: Polarity) -> Result<Self, LexiconError> {
        let tokens: Vec<String> = segment(phrase)
            .into_iter()
            .flat_map(|s| s.tokens.into_iter().map(|t| t.surface))
            .collect();
        if tokens.len() < 2 {
            return Err(LexiconError::InvalidIdiom(format!(
                "{phrase:?} has {} token(s), idioms need at least 2",
                tokens.len()
            )));
        }
        if polarity == Polarity::Nu {
            return Err(LexiconError::InvalidIdiom(format!(
                "{phrase:?} must be PO or NG"
            )));
        }
        Ok(IdiomEntry {
            phrase: tokens,
            polarity,
            gloss: None,
        })
    }

    pub fn len(&self) -> usize {
        self.phrase.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrase.is_empty()
    }
}

/// Idiom phrases indexed by first token for longest-match lookup.
#[derive(Debug, Clone, Default)]
pub struct IdiomLexicon {
    entries: Vec<IdiomEntry>,
    // first token -> entry indices, longest phrase first
    index: HashMap<String, Vec<usize>>,
}

impl IdiomLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, entry: IdiomEntry) -> Result<(), LexiconError> {
        if entry.phrase.len() < 2 || entry.polarity == Polarity::Nu {
            return Err(LexiconError::InvalidIdiom(entry.phrase.join(" ")));
        }
        let bucket = self.index.entry(entry.phrase[0].clone()).or_default();
        if bucket
            .iter()
            .any(|&i| self.entries[i].phrase == entry.phrase)
        {
            return Err(LexiconError::DuplicatePhrase {
                path: String::new(),
                line: 0,
                phrase: entry.phrase.join(" "),
            });
        }
        bucket.push(self.entries.len());
        let entries = &self.entries;
        bucket.sort_by_key(|&i| {
            std::cmp::Reverse(entries.get(i).map_or(entry.phrase.len(), IdiomEntry::len))
        });
        self.entries.push(entry);
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(io_err(path))?;
        Self::from_reader(BufReader::new(file), &path.display().to_string())
    }

    /// Parses `phrase<TAB>polarity[<TAB>gloss]` rows; `#` lines are comments.
    pub fn from_reader(reader: impl BufRead, name: &str) -> Result<Self, LexiconError> {
        let mut lex = IdiomLexicon::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| LexiconError::Io {
                path: name.to_owned(),
                source,
            })?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| LexiconError::Parse {
                path: name.to_owned(),
                line: i + 1,
                reason,
            };
            let cols: Vec<&str> = line.split('\t').collect();
            if !(2..=3).contains(&cols.len()) {
                return Err(parse_err(format!(
                    "expected 2 or 3 columns, found {}",
                    cols.len()
                )));
            }
            let polarity = cols[1].parse::<Polarity>().map_err(parse_err)?;
            let mut entry =
                IdiomEntry::new(cols[0], polarity).map_err(|e| parse_err(e.to_string()))?;
            entry.gloss = cols
                .get(2)
                .map(|g| g.trim())
                .filter(|g| !g.is_empty())
                .map(str::to_owned);
            lex.insert(entry).map_err(|e| match e {
                LexiconError::DuplicatePhrase { phrase, .. } => LexiconError::DuplicatePhrase {
                    path: name.to_owned(),
                    line: i + 1,
                    phrase,
                },
                other => other,
            })?;
        }
        Ok(lex)
    }

    /// Longest idiom that starts at `tokens[0]`.
    pub fn longest_match(&self, tokens: &[&str]) -> Option<&IdiomEntry> {
        let first = tokens.first()?;
        self.index
            .get(*first)?
            .iter()
            .map(|&i| &self.entries[i])
            .find(|e| {
                e.phrase.len() <= tokens.len() && e.phrase.iter().zip(tokens).all(|(p, t)| p == t)
            })
    }

    pub fn entries(&self) -> &[IdiomEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
