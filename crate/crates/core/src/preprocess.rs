//! Text cleaning, normalization, sentence splitting, tokenization and
//! part-of-speech tagging for MSA and Egyptian-dialect text.
//!
//! Every lexicon lookup downstream operates on the canonical form produced by
//! [`normalize_text`]: alef variants folded to bare alef, alef-maqsura folded
//! to ya, tatweel and harakat stripped, and everything that is not an Arabic
//! letter, whitespace or a sentence delimiter removed.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::lexicon::SentimentLexicon;

/// Mask token substituted for a positive idiom.
pub const PO_PHRASE: &str = "PO_Phrase";
/// Mask token substituted for a negative idiom.
pub const NG_PHRASE: &str = "NG_Phrase";

/// Characters that end a sentence. Commas deliberately do not.
pub const SENTENCE_DELIMITERS: [char; 6] = ['.', '!', '?', '\u{061F}', '\u{061B}', '\n'];

#[derive(Debug, Error)]
pub enum PreprocessError {
    #[error("tagger returned {got} tags for {expected} tokens")]
    TaggerFailure { expected: usize, got: usize },
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

enum CharClass {
    Letter(char),
    Delimiter(char),
    Space,
    Drop,
}

fn is_arabic_mark(c: char) -> bool {
    matches!(c,
        '\u{0610}'..='\u{061A}'
        | '\u{064B}'..='\u{065F}'
        | '\u{0670}'
        | '\u{06D6}'..='\u{06DC}'
        | '\u{06DF}'..='\u{06E8}'
        | '\u{06EA}'..='\u{06ED}'
        | '\u{08D3}'..='\u{08E1}'
        | '\u{08E3}'..='\u{08FF}'
        | '\u{0640}')
}

fn is_arabic_letter(c: char) -> bool {
    matches!(c,
        '\u{0621}'..='\u{063A}'
        | '\u{0641}'..='\u{064A}'
        | '\u{066E}'..='\u{066F}'
        | '\u{0671}'..='\u{06D3}'
        | '\u{06D5}'
        | '\u{06EE}'..='\u{06EF}'
        | '\u{06FA}'..='\u{06FC}'
        | '\u{06FF}')
}

fn classify(c: char) -> CharClass {
    match c {
        // hamza-above, hamza-below, madda, wasla
        '\u{0623}' | '\u{0625}' | '\u{0622}' | '\u{0671}' => CharClass::Letter('\u{0627}'),
        '\u{0649}' => CharClass::Letter('\u{064A}'),
        '\u{06D4}' => CharClass::Delimiter('.'),
        c if SENTENCE_DELIMITERS.contains(&c) => CharClass::Delimiter(c),
        c if is_arabic_mark(c) => CharClass::Drop,
        '\u{200B}'..='\u{200F}' | '\u{FEFF}' => CharClass::Drop,
        c if is_arabic_letter(c) => CharClass::Letter(c),
        _ => CharClass::Space,
    }
}

/// Canonicalizes raw text.
///
/// Non-Arabic letters, digits and symbols act as word separators, so
/// `"جميل،رائع"` becomes two words. Whitespace runs collapse to one space and
/// a delimiter with no words before it in its segment is dropped; the output
/// is therefore a fixed point of this function.
pub fn normalize_text(raw: &str) -> String {
    let mut parts: Vec<(String, Option<char>)> = Vec::new();
    let mut words: Vec<String> = Vec::new();
    let mut word = String::new();

    for c in raw.chars() {
        match classify(c) {
            CharClass::Letter(l) => word.push(l),
            CharClass::Drop => {}
            CharClass::Space => {
                if !word.is_empty() {
                    words.push(std::mem::take(&mut word));
                }
            }
            CharClass::Delimiter(d) => {
                if !word.is_empty() {
                    words.push(std::mem::take(&mut word));
                }
                if !words.is_empty() {
                    parts.push((words.join(" "), Some(d)));
                    words.clear();
                }
            }
        }
    }
    if !word.is_empty() {
        words.push(word);
    }
    if !words.is_empty() {
        parts.push((words.join(" "), None));
    }

    let mut out = String::new();
    let mut prev: Option<char> = None;
    for (i, (segment, delim)) in parts.iter().enumerate() {
        if i > 0 && prev != Some('\n') {
            out.push(' ');
        }
        out.push_str(segment);
        if let Some(d) = delim {
            out.push(*d);
        }
        prev = *delim;
    }
    out
}

/// Splits normalized text into sentences on [`SENTENCE_DELIMITERS`].
pub fn split_sentences(text: &str) -> Vec<String> {
    text.split(|c| SENTENCE_DELIMITERS.contains(&c))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PosTag {
    /// Adjective
    JJ,
    /// Noun
    NN,
    /// Verb
    VB,
    #[default]
    Other,
}

impl PosTag {
    /// Tags that can carry sentiment and are eligible for lexicon expansion.
    pub fn is_content(self) -> bool {
        matches!(self, PosTag::JJ | PosTag::NN | PosTag::VB)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosTag::JJ => "JJ",
            PosTag::NN => "NN",
            PosTag::VB => "VB",
            PosTag::Other => "OTHER",
        })
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "JJ" => Ok(PosTag::JJ),
            "NN" => Ok(PosTag::NN),
            "VB" => Ok(PosTag::VB),
            "OTHER" => Ok(PosTag::Other),
            other => Err(format!("unknown POS tag {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// 1-based position within the sentence.
    pub position: usize,
    pub tag: PosTag,
}

impl Token {
    pub fn is_mask(&self) -> bool {
        self.surface == PO_PHRASE || self.surface == NG_PHRASE
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
}

impl Sentence {
    /// Builds a sentence from surfaces, numbering positions from 1.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| Token {
                surface: w.into(),
                position: i + 1,
                tag: PosTag::Other,
            })
            .collect();
        Sentence { tokens }
    }

    pub fn word_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    pub fn tags(&self) -> Vec<PosTag> {
        self.tokens.iter().map(|t| t.tag).collect()
    }

    /// Restores the 1..n position invariant after tokens were removed or merged.
    pub fn renumber(&mut self) {
        for (i, t) in self.tokens.iter_mut().enumerate() {
            t.position = i + 1;
        }
    }
}

fn is_token_separator(c: char) -> bool {
    c.is_whitespace() || !(c.is_alphanumeric() || c == '_' || is_arabic_mark(c))
}

/// Splits a sentence on whitespace and residual punctuation.
///
/// No clitic segmentation happens here; lexicon entries are stored in
/// surface form. The mask tokens survive because `_` is not a separator.
pub fn tokenize(sentence: &str) -> Sentence {
    Sentence::from_words(sentence.split(is_token_separator).filter(|w| !w.is_empty()))
}

/// Normalizes raw text and returns its tokenized sentences.
pub fn segment(raw: &str) -> Vec<Sentence> {
    split_sentences(&normalize_text(raw))
        .iter()
        .map(|s| tokenize(s))
        .collect()
}

/// Set of normalized stopwords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopWords(
            words
                .into_iter()
                .map(|w| normalize_text(w.as_ref()))
                .filter(|w| !w.is_empty())
                .collect(),
        )
    }

    /// One word per line; `#` starts a comment.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, PreprocessError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| PreprocessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::from_words(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        ))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Drops stopword tokens and renumbers the survivors. Mask tokens are kept.
pub fn remove_stopwords(s: &Sentence, stoplist: &StopWords) -> Sentence {
    let mut out = Sentence {
        tokens: s
            .tokens
            .iter()
            .filter(|t| t.is_mask() || !stoplist.contains(&t.surface))
            .cloned()
            .collect(),
    };
    out.renumber();
    out
}

/// A part-of-speech tagger. Implementations must return one tag per word.
pub trait PosTagger: Send + Sync {
    fn tag(&self, words: &[&str]) -> Vec<PosTag>;
}

/// Fills the tag of every token, rejecting taggers that miscount.
pub fn pos_tag(s: &Sentence, tagger: &dyn PosTagger) -> Result<Sentence, PreprocessError> {
    let tags = tagger.tag(&s.surfaces());
    if tags.len() != s.tokens.len() {
        return Err(PreprocessError::TaggerFailure {
            expected: s.tokens.len(),
            got: tags.len(),
        });
    }
    let mut out = s.clone();
    for (token, tag) in out.tokens.iter_mut().zip(tags) {
        token.tag = tag;
    }
    Ok(out)
}

/// Word → tag lookup with an `OTHER` fallback.
#[derive(Debug, Clone, Default)]
pub struct TableTagger {
    table: HashMap<String, PosTag>,
}

impl TableTagger {
    pub fn new(table: HashMap<String, PosTag>) -> Self {
        TableTagger {
            table: table
                .into_iter()
                .map(|(w, t)| (normalize_text(&w), t))
                .collect(),
        }
    }

    /// Reads a `word<TAB>tag` file. Blank lines and `#` comments are skipped.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, PreprocessError> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let file = fs::File::open(path).map_err(|source| PreprocessError::Io {
            path: name.clone(),
            source,
        })?;
        Self::from_reader(std::io::BufReader::new(file), &name)
    }

    pub fn from_reader(reader: impl BufRead, name: &str) -> Result<Self, PreprocessError> {
        let mut table = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|source| PreprocessError::Io {
                path: name.to_owned(),
                source,
            })?;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parse_err = |reason: String| PreprocessError::Parse {
                path: name.to_owned(),
                line: i + 1,
                reason,
            };
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() != 2 {
                return Err(parse_err(format!(
                    "expected 2 columns, found {}",
                    cols.len()
                )));
            }
            let word = normalize_text(cols[0]);
            if word.is_empty() {
                return Err(parse_err("empty word".into()));
            }
            let tag = cols[1].parse::<PosTag>().map_err(parse_err)?;
            table.insert(word, tag);
        }
        Ok(TableTagger { table })
    }

    /// Adds every lexicon word missing from the table as an adjective.
    pub fn with_lexicon_defaults(mut self, lexicon: &SentimentLexicon) -> Self {
        for entry in lexicon.entries() {
            self.table.entry(entry.word.clone()).or_insert(PosTag::JJ);
        }
        self
    }

    pub fn get(&self, word: &str) -> PosTag {
        self.table.get(word).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl PosTagger for TableTagger {
    fn tag(&self, words: &[&str]) -> Vec<PosTag> {
        words.iter().map(|w| self.get(w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent per-codepoint filter: keeps only what must survive, folds
    // the mapping table, ignores whitespace layout.
    fn oracle_letters(raw: &str) -> String {
        raw.chars()
            .filter_map(|c| match c as u32 {
                0x0623 | 0x0625 | 0x0622 | 0x0671 => Some('ا'),
                0x0649 => Some('ي'),
                0x0640 | 0x064B..=0x065F | 0x0670 => None,
                0x0621..=0x063A | 0x0641..=0x064A => Some(c),
                _ => Some(' '),
            })
            .collect::<String>()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn normalizes_alef_variants() {
        assert_eq!(normalize_text("أحب مصر"), "احب مصر");
        assert_eq!(normalize_text("إسلام آمن ٱلله"), "اسلام امن الله");
        assert_eq!(normalize_text("على"), "علي");
    }

    #[test]
    fn empty_input() {
        assert_eq!(normalize_text(""), "");
        assert!(split_sentences("").is_empty());
        assert_eq!(tokenize("").word_count(), 0);
    }

    #[test]
    fn strips_foreign_text_digits_and_diacritics() {
        let raw = "Great! رائِع 123";
        assert_eq!(normalize_text(raw), "رائع");
        assert_eq!(oracle_letters(raw), "رائع");
        assert_eq!(normalize_text("جمـــيل ٣٤"), "جميل");
    }

    #[test]
    fn keeps_delimiters_after_words() {
        assert_eq!(
            normalize_text("المكان جميل.   الخدمة سيئة!!"),
            "المكان جميل. الخدمة سيئة!"
        );
        assert_eq!(normalize_text("رائع\n\nجدا"), "رائع\nجدا");
        assert_eq!(normalize_text("جميل،رائع"), "جميل رائع");
    }

    #[test]
    fn splits_sentences() {
        assert_eq!(
            split_sentences("المكان جميل. الخدمة سيئة"),
            vec!["المكان جميل", "الخدمة سيئة"]
        );
        assert_eq!(split_sentences("رائع"), vec!["رائع"]);
        assert_eq!(
            split_sentences("هل هو جيد؟ نعم؛ ربما\nلا"),
            vec!["هل هو جيد", "نعم", "ربما", "لا"]
        );
    }

    #[test]
    fn tokenizes_with_positions() {
        let s = tokenize("هذا المسلسل رائع");
        assert_eq!(s.surfaces(), vec!["هذا", "المسلسل", "رائع"]);
        assert_eq!(
            s.tokens.iter().map(|t| t.position).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert_eq!(tokenize("رائع، جدا").surfaces(), vec!["رائع", "جدا"]);
        assert_eq!(
            tokenize("الفيلم NG_Phrase فعلا").surfaces(),
            vec!["الفيلم", "NG_Phrase", "فعلا"]
        );
    }

    #[test]
    fn stopword_removal_renumbers() {
        let s = tokenize("هذا المسلسل رائع");
        let stop = StopWords::from_words(["هذا"]);
        let out = remove_stopwords(&s, &stop);
        assert_eq!(out.surfaces(), vec!["المسلسل", "رائع"]);
        assert_eq!(out.tokens[0].position, 1);
        assert_eq!(out.tokens[1].position, 2);
        assert_eq!(remove_stopwords(&s, &StopWords::new()), s);
        assert!(remove_stopwords(&Sentence::default(), &stop).is_empty());
    }

    #[test]
    fn stopwords_never_remove_masks() {
        let s = Sentence::from_words(["NG_Phrase", "و"]);
        let stop = StopWords::from_words(["و"]);
        // a stoplist cannot contain the mask token after normalization, but the
        // guard must hold regardless
        let mut forced = stop.clone();
        forced.0.insert(NG_PHRASE.into());
        assert_eq!(remove_stopwords(&s, &forced).surfaces(), vec!["NG_Phrase"]);
    }

    #[test]
    fn table_tagger_lookup_and_fallback() {
        let tagger = TableTagger::new(HashMap::from([
            ("خدمة".to_string(), PosTag::NN),
            ("سيئة".to_string(), PosTag::JJ),
        ]));
        let s = pos_tag(&tokenize("خدمة سيئة"), &tagger).unwrap();
        assert_eq!(s.tags(), vec![PosTag::NN, PosTag::JJ]);
        let s = pos_tag(&tokenize("كلمة"), &tagger).unwrap();
        assert_eq!(s.tags(), vec![PosTag::Other]);
        assert!(pos_tag(&Sentence::default(), &tagger).unwrap().is_empty());
    }

    struct BrokenTagger;
    impl PosTagger for BrokenTagger {
        fn tag(&self, _: &[&str]) -> Vec<PosTag> {
            vec![PosTag::NN]
        }
    }

    #[test]
    fn miscounting_tagger_is_rejected() {
        let err = pos_tag(&tokenize("خدمة سيئة جدا"), &BrokenTagger).unwrap_err();
        assert!(matches!(
            err,
            PreprocessError::TaggerFailure {
                expected: 3,
                got: 1
            }
        ));
    }

    #[test]
    fn tag_table_parse_errors() {
        let bad = "خدمة\tNN\nسيئة\tADJ\n";
        let err = TableTagger::from_reader(bad.as_bytes(), "tags.tsv").unwrap_err();
        assert!(matches!(err, PreprocessError::Parse { line: 2, .. }));
    }

    fn mixed_text() -> impl Strategy<Value = String> {
        let pieces = prop::sample::select(vec![
            "أ", "إ", "آ", "ٱ", "ى", "ـ", "َ", "ُ", "ِ", "ّ", "ْ", "ً", "ب", "ت", "ة", "ي", "ا", "م",
            "ل", " ", "  ", "\n", ".", "!", "؟", "؛", "،", "a", "Z", "7", "٣", "#", "@", "😀",
            "\t",
        ]);
        prop::collection::vec(pieces, 0..40).prop_map(|v| v.concat())
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(raw in mixed_text()) {
            let once = normalize_text(&raw);
            prop_assert_eq!(normalize_text(&once), once.clone());
        }

        #[test]
        fn normalization_removes_marks_and_ascii(raw in mixed_text()) {
            let out = normalize_text(&raw);
            prop_assert!(!out.chars().any(|c| is_arabic_mark(c) || c.is_ascii_alphanumeric()));
            prop_assert_eq!(
                out.split(|c: char| c.is_whitespace() || SENTENCE_DELIMITERS.contains(&c))
                    .filter(|w| !w.is_empty())
                    .collect::<Vec<_>>()
                    .join(" "),
                oracle_letters(&raw)
            );
        }

        #[test]
        fn tokenize_rejoin_is_stable(raw in mixed_text()) {
            for sentence in split_sentences(&normalize_text(&raw)) {
                let first = tokenize(&sentence);
                let again = tokenize(&first.surfaces().join(" "));
                prop_assert_eq!(first, again);
            }
        }

        #[test]
        fn stopword_removal_keeps_order(raw in mixed_text(), stop_mask in any::<u64>()) {
            let s = tokenize(&normalize_text(&raw).replace(SENTENCE_DELIMITERS, " "));
            let stop = StopWords::from_words(
                s.surfaces().iter().enumerate().filter(|(i, _)| stop_mask >> (i % 64) & 1 == 1).map(|(_, w)| *w),
            );
            let out = remove_stopwords(&s, &stop);
            let expected: Vec<&str> = s.surfaces().into_iter().filter(|w| !stop.contains(w)).collect();
            prop_assert_eq!(out.surfaces(), expected);
            prop_assert!(out.tokens.iter().enumerate().all(|(i, t)| t.position == i + 1));
        }
    }
}
