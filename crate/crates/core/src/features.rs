//! Topic → feature vector conversion.
//!
//! A topic is normalized, split into sentences, tokenized, idiom-masked,
//! stopword-filtered and POS-tagged. Sentiment tokens then receive a base
//! value from the lexicon (+1, -1, or 0 for NU), which negators flip and
//! intensifiers double. Opposite-sign noun/adjective bigrams collapse into a
//! single negative contribution. The result fills a fixed 17-slot schema.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::lexicon::{IdiomLexicon, Polarity, SentimentLexicon};
use crate::preprocess::{
    normalize_text, pos_tag, remove_stopwords, segment, PosTag, PosTagger, PreprocessError,
    Sentence, StopWords, Token, NG_PHRASE, PO_PHRASE,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const NUM_SLOTS: usize = 17;

/// Slot indices of the feature schema (1-based, as written to SVM-light files).
pub mod slot {
    pub const HAS_PO_SENTI: u32 = 1;
    pub const HAS_NG_SENTI: u32 = 2;
    pub const HAS_PO_PH: u32 = 3;
    pub const HAS_NG_PH: u32 = 4;
    pub const W_PO: u32 = 5;
    pub const W_NG: u32 = 6;
    pub const W_NU: u32 = 7;
    pub const PO_W_POSITION: u32 = 8;
    pub const NG_W_POSITION: u32 = 9;
    pub const NO_OF_WORDS: u32 = 10;
    pub const IS_NEGATION: u32 = 11;
    pub const N_O_NEGATION: u32 = 12;
    pub const IS_QUESTION: u32 = 13;
    pub const N_O_QUESTION: u32 = 14;
    pub const IS_WISHFUL: u32 = 15;
    pub const N_O_WISHFUL: u32 = 16;
    pub const N_O_CONFLICT: u32 = 17;
}

pub const SLOT_NAMES: [&str; NUM_SLOTS] = [
    "has_PO_senti",
    "has_NG_senti",
    "has_PO_ph",
    "has_NG_ph",
    "W_PO",
    "W_NG",
    "W_NU",
    "PO_W_Position",
    "NG_W_Position",
    "No_of_words",
    "Is_Negation",
    "N_O_Negation",
    "Is_Question",
    "N_O_Question",
    "Is_wishful",
    "N_O_wishful",
    "N_O_Conflict",
];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("{path}: duplicate cue term {term:?}")]
    DuplicateCue { path: String, term: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Sparse slot → value map. Zero values are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: BTreeMap<u32, f64>,
    pub schema_version: u32,
}

impl Default for FeatureVector {
    fn default() -> Self {
        FeatureVector {
            values: BTreeMap::new(),
            schema_version: SCHEMA_VERSION,
        }
    }
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_version(schema_version: u32) -> Self {
        FeatureVector {
            values: BTreeMap::new(),
            schema_version,
        }
    }

    /// Builds a vector from `(slot, value)` pairs.
    ///
    /// # Panics
    /// If a slot lies outside `1..=17`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut v = Self::new();
        for (s, x) in pairs {
            v.set(s, x);
        }
        v
    }

    /// # Panics
    /// If `slot` lies outside `1..=17`.
    pub fn set(&mut self, slot: u32, value: f64) {
        assert!(
            (1..=NUM_SLOTS as u32).contains(&slot),
            "feature slot {slot} outside 1..={NUM_SLOTS}"
        );
        if value == 0.0 {
            self.values.remove(&slot);
        } else {
            self.values.insert(slot, value);
        }
    }

    pub fn get(&self, slot: u32) -> f64 {
        self.values.get(&slot).copied().unwrap_or(0.0)
    }

    /// Nonzero entries in increasing slot order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_dense(&self) -> [f64; NUM_SLOTS] {
        let mut out = [0.0; NUM_SLOTS];
        for (k, v) in self.iter() {
            out[k as usize - 1] = v;
        }
        out
    }
}

/// A set of (possibly multi-word) cue terms, matched longest-first.
#[derive(Debug, Clone, Default)]
pub struct CueSet {
    terms: Vec<Vec<String>>,
    by_first: HashMap<String, Vec<usize>>,
}

impl CueSet {
    /// Normalizes each term; a term that repeats after normalization is an error.
    pub fn from_terms<I, S>(terms: I) -> Result<Self, String>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = CueSet::default();
        let mut seen = HashSet::new();
        for term in terms {
            let tokens: Vec<String> = segment(term.as_ref())
                .into_iter()
                .flat_map(|s| s.tokens.into_iter().map(|t| t.surface))
                .collect();
            if tokens.is_empty() {
                continue;
            }
            if !seen.insert(tokens.clone()) {
                return Err(tokens.join(" "));
            }
            set.by_first
                .entry(tokens[0].clone())
                .or_default()
                .push(set.terms.len());
            set.terms.push(tokens);
        }
        for bucket in set.by_first.values_mut() {
            let terms = &set.terms;
            bucket.sort_by_key(|&i| std::cmp::Reverse(terms[i].len()));
        }
        Ok(set)
    }

    /// One term per line, `#` comments allowed.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, FeatureError> {
        let path = path.as_ref();
        let name = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| FeatureError::Io {
            path: name.clone(),
            source,
        })?;
        Self::from_terms(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        )
        .map_err(|term| FeatureError::DuplicateCue { path: name, term })
    }

    /// Length of the longest term starting at `words[i]`.
    pub fn match_at(&self, words: &[&str], i: usize) -> Option<usize> {
        let bucket = self.by_first.get(*words.get(i)?)?;
        bucket
            .iter()
            .map(|&t| &self.terms[t])
            .find(|term| {
                i + term.len() <= words.len() && term.iter().zip(&words[i..]).all(|(a, b)| a == b)
            })
            .map(Vec::len)
    }

    /// Non-overlapping `(start, len)` occurrences, scanned left to right.
    pub fn occurrences(&self, words: &[&str]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < words.len() {
            match self.match_at(words, i) {
                Some(len) => {
                    out.push((i, len));
                    i += len;
                }
                None => i += 1,
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Contextual cue terms by role.
#[derive(Debug, Clone, Default)]
pub struct CueLists {
    pub negators: CueSet,
    pub intensifiers: CueSet,
    pub questions: CueSet,
    pub wishful: CueSet,
}

impl CueLists {
    /// Loads `negators.txt`, `intensifiers.txt`, `questions.txt` and
    /// `wishful.txt` from `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self, FeatureError> {
        let dir = dir.as_ref();
        Self::load(
            dir.join("negators.txt"),
            dir.join("intensifiers.txt"),
            dir.join("questions.txt"),
            dir.join("wishful.txt"),
        )
    }

    pub fn load(
        negators: impl AsRef<Path>,
        intensifiers: impl AsRef<Path>,
        questions: impl AsRef<Path>,
        wishful: impl AsRef<Path>,
    ) -> Result<Self, FeatureError> {
        Ok(CueLists {
            negators: CueSet::load(negators)?,
            intensifiers: CueSet::load(intensifiers)?,
            questions: CueSet::load(questions)?,
            wishful: CueSet::load(wishful)?,
        })
    }
}

/// Window sizes for valence shifters, in tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShifterConfig {
    /// A negator ending this many tokens or fewer before a sentiment word flips it.
    pub negation_window: usize,
    /// An intensifier starting this many tokens or fewer after a sentiment word doubles it.
    pub intensifier_window: usize,
}

impl Default for ShifterConfig {
    fn default() -> Self {
        ShifterConfig {
            negation_window: 3,
            intensifier_window: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredToken {
    pub token: Token,
    /// Lexicon polarity as -1, 0 or +1. NU words have base 0.
    pub base: i8,
    /// Base after negation and intensification, in -2..=2.
    pub adjusted: i8,
    /// The token is an NU lexicon word.
    pub neutral: bool,
    /// Part of a conflicting noun/adjective bigram.
    pub conflict: bool,
}

/// Idiom counts from masking.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhraseCounts {
    pub po_phrases: usize,
    pub ng_phrases: usize,
}

/// Replaces each leftmost-longest idiom occurrence with `PO_Phrase` or
/// `NG_Phrase` and renumbers positions.
pub fn mask_idioms(sentences: &[Sentence], idioms: &IdiomLexicon) -> (Vec<Sentence>, PhraseCounts) {
    let mut counts = PhraseCounts::default();
    let masked = sentences
        .iter()
        .map(|s| {
            let words = s.surfaces();
            let mut tokens = Vec::with_capacity(s.tokens.len());
            let mut i = 0;
            while i < words.len() {
                match idioms.longest_match(&words[i..]) {
                    Some(entry) => {
                        let mask = if entry.polarity == Polarity::Po {
                            counts.po_phrases += 1;
                            PO_PHRASE
                        } else {
                            counts.ng_phrases += 1;
                            NG_PHRASE
                        };
                        tokens.push(Token {
                            surface: mask.to_owned(),
                            position: 0,
                            tag: PosTag::Other,
                        });
                        i += entry.len();
                    }
                    None => {
                        tokens.push(s.tokens[i].clone());
                        i += 1;
                    }
                }
            }
            let mut out = Sentence { tokens };
            out.renumber();
            out
        })
        .collect();
    (masked, counts)
}

/// Assigns lexicon values and applies negation and intensification.
pub fn score_tokens(
    s: &Sentence,
    lex: &SentimentLexicon,
    cues: &CueLists,
    config: &ShifterConfig,
) -> Vec<ScoredToken> {
    let words = s.surfaces();
    let negator_ends: Vec<usize> = cues
        .negators
        .occurrences(&words)
        .into_iter()
        .map(|(start, len)| start + len - 1)
        .collect();
    let intensifier_starts: Vec<usize> = cues
        .intensifiers
        .occurrences(&words)
        .into_iter()
        .map(|(start, _)| start)
        .collect();

    s.tokens
        .iter()
        .enumerate()
        .map(|(i, token)| {
            let polarity = if token.is_mask() {
                None
            } else {
                lex.get(&token.surface).map(|e| e.polarity)
            };
            let base = polarity.map_or(0, Polarity::sign);
            let mut adjusted = base;
            if base != 0 {
                if negator_ends
                    .iter()
                    .any(|&e| e < i && i - e <= config.negation_window)
                {
                    adjusted = -adjusted;
                }
                if intensifier_starts
                    .iter()
                    .any(|&st| st > i && st - i <= config.intensifier_window)
                {
                    adjusted *= 2;
                }
            }
            ScoredToken {
                token: token.clone(),
                base,
                adjusted,
                neutral: polarity == Some(Polarity::Nu),
                conflict: false,
            }
        })
        .collect()
}

/// Finds adjacent NN/JJ (either order) bigrams with opposite nonzero values.
///
/// Each hit zeroes both tokens and places a single -1 on the first one.
/// Scanning is left to right and hits never overlap.
pub fn detect_conflict_phrases(scored: &[ScoredToken]) -> (usize, Vec<ScoredToken>) {
    let mut out = scored.to_vec();
    let mut count = 0;
    let mut i = 0;
    while i + 1 < out.len() {
        let (a, b) = (&out[i], &out[i + 1]);
        let tags = (a.token.tag, b.token.tag);
        let noun_adj = matches!(tags, (PosTag::NN, PosTag::JJ) | (PosTag::JJ, PosTag::NN));
        if noun_adj && (a.adjusted as i16) * (b.adjusted as i16) < 0 {
            out[i].adjusted = -1;
            out[i + 1].adjusted = 0;
            out[i].conflict = true;
            out[i + 1].conflict = true;
            count += 1;
            i += 2;
        } else {
            i += 1;
        }
    }
    (count, out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzedSentence {
    pub sentence: Sentence,
    /// Scores after conflict resolution.
    pub scored: Vec<ScoredToken>,
}

/// Everything computed for one topic before it is flattened into slots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopicAnalysis {
    pub sentences: Vec<AnalyzedSentence>,
    pub phrases: PhraseCounts,
    pub conflicts: usize,
    pub negations: usize,
    pub questions: usize,
    pub wishful: usize,
}

impl TopicAnalysis {
    pub fn to_features(&self) -> FeatureVector {
        let mut w_po = 0.0;
        let mut w_ng = 0.0;
        let mut w_nu = 0.0;
        let mut po_pos = 0.0;
        let mut ng_pos = 0.0;
        let mut words = 0usize;
        for s in &self.sentences {
            let wc = s.sentence.word_count() as f64;
            words += s.sentence.word_count();
            for t in &s.scored {
                let weight = wc / t.token.position as f64;
                if t.adjusted > 0 {
                    w_po += t.adjusted as f64;
                    po_pos += weight;
                } else if t.adjusted < 0 {
                    w_ng += -(t.adjusted as f64);
                    ng_pos += weight;
                }
                if t.neutral {
                    w_nu += 1.0;
                }
            }
        }
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        let mut v = FeatureVector::new();
        v.set(slot::HAS_PO_SENTI, flag(w_po > 0.0));
        v.set(slot::HAS_NG_SENTI, flag(w_ng > 0.0));
        v.set(slot::HAS_PO_PH, flag(self.phrases.po_phrases > 0));
        v.set(slot::HAS_NG_PH, flag(self.phrases.ng_phrases > 0));
        v.set(slot::W_PO, w_po);
        v.set(slot::W_NG, w_ng);
        v.set(slot::W_NU, w_nu);
        v.set(slot::PO_W_POSITION, po_pos);
        v.set(slot::NG_W_POSITION, ng_pos);
        v.set(slot::NO_OF_WORDS, words as f64);
        v.set(slot::IS_NEGATION, flag(self.negations > 0));
        v.set(slot::N_O_NEGATION, self.negations as f64);
        v.set(slot::IS_QUESTION, flag(self.questions > 0));
        v.set(slot::N_O_QUESTION, self.questions as f64);
        v.set(slot::IS_WISHFUL, flag(self.wishful > 0));
        v.set(slot::N_O_WISHFUL, self.wishful as f64);
        v.set(slot::N_O_CONFLICT, self.conflicts as f64);
        v
    }

    /// Net lexicon score: adjusted word values plus ±3 per masked idiom.
    pub fn net_score(&self) -> f64 {
        let words: i64 = self
            .sentences
            .iter()
            .flat_map(|s| &s.scored)
            .map(|t| t.adjusted.clamp(-2, 2) as i64)
            .sum();
        let phrases = 3 * self.phrases.po_phrases as i64 - 3 * self.phrases.ng_phrases as i64;
        (words + phrases) as f64
    }
}

/// Rule-based polarity from the sign of the net score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleScore {
    pub net: f64,
    pub label: Polarity,
}

/// Shared read-only resources for turning topics into features.
#[derive(Clone, Copy)]
pub struct Analyzer<'a> {
    pub lexicon: &'a SentimentLexicon,
    pub idioms: &'a IdiomLexicon,
    pub cues: &'a CueLists,
    pub stopwords: &'a StopWords,
    pub tagger: &'a dyn PosTagger,
    pub config: ShifterConfig,
}

impl<'a> Analyzer<'a> {
    pub fn new(
        lexicon: &'a SentimentLexicon,
        idioms: &'a IdiomLexicon,
        cues: &'a CueLists,
        stopwords: &'a StopWords,
        tagger: &'a dyn PosTagger,
    ) -> Self {
        Analyzer {
            lexicon,
            idioms,
            cues,
            stopwords,
            tagger,
            config: ShifterConfig::default(),
        }
    }

    pub fn with_config(mut self, config: ShifterConfig) -> Self {
        self.config = config;
        self
    }

    /// Runs the full pipeline on raw topic text.
    ///
    /// Idioms are masked before stopword removal so that phrases containing
    /// stopwords still match. The only error source is a misbehaving tagger.
    pub fn analyze(&self, text: &str) -> Result<TopicAnalysis, PreprocessError> {
        let (masked, phrases) = mask_idioms(&segment(text), self.idioms);
        let mut analysis = TopicAnalysis {
            phrases,
            ..Default::default()
        };
        for sentence in masked {
            let sentence = pos_tag(&remove_stopwords(&sentence, self.stopwords), self.tagger)?;
            if sentence.is_empty() {
                continue;
            }
            let words = sentence.surfaces();
            analysis.negations += self.cues.negators.occurrences(&words).len();
            analysis.questions += self.cues.questions.occurrences(&words).len();
            analysis.wishful += self.cues.wishful.occurrences(&words).len();
            let scored = score_tokens(&sentence, self.lexicon, self.cues, &self.config);
            let (conflicts, scored) = detect_conflict_phrases(&scored);
            analysis.conflicts += conflicts;
            analysis
                .sentences
                .push(AnalyzedSentence { sentence, scored });
        }
        Ok(analysis)
    }

    pub fn extract_features(&self, text: &str) -> Result<FeatureVector, PreprocessError> {
        Ok(self.analyze(text)?.to_features())
    }

    /// Unsupervised baseline: ±1 per word (±2 when intensified), ±3 per idiom.
    pub fn lexicon_rule_score(&self, text: &str) -> Result<RuleScore, PreprocessError> {
        let net = self.analyze(text)?.net_score();
        let label = if net > 0.0 {
            Polarity::Po
        } else if net < 0.0 {
            Polarity::Ng
        } else {
            Polarity::Nu
        };
        Ok(RuleScore { net, label })
    }

    /// Extracts features for many texts in parallel, preserving order.
    pub fn extract_all<S: AsRef<str> + Sync>(
        &self,
        texts: &[S],
    ) -> Result<Vec<FeatureVector>, PreprocessError> {
        texts
            .par_iter()
            .map(|t| self.extract_features(t.as_ref()))
            .collect()
    }
}

/// Normalized form of a single cue or lexicon term, for callers building
/// lists in code.
pub fn normalize_term(term: &str) -> String {
    normalize_text(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{IdiomEntry, LexiconEntry};
    use crate::preprocess::{tokenize, TableTagger};

    fn lexicon(words: &[(&str, Polarity)]) -> SentimentLexicon {
        let mut lex = SentimentLexicon::new();
        for (w, p) in words {
            lex.insert(LexiconEntry::new(w, *p)).unwrap();
        }
        lex
    }

    fn cues() -> CueLists {
        CueLists {
            negators: CueSet::from_terms(["لا", "مش", "ليس", "لن"]).unwrap(),
            intensifiers: CueSet::from_terms(["جدا", "اوي", "بشدة"]).unwrap(),
            questions: CueSet::from_terms(["هل", "اين", "ليه"]).unwrap(),
            wishful: CueSet::from_terms(["يارب", "اتمني", "يا رب"]).unwrap(),
        }
    }

    fn adjusted(text: &str, lex: &SentimentLexicon) -> Vec<i8> {
        score_tokens(&tokenize(text), lex, &cues(), &ShifterConfig::default())
            .iter()
            .map(|t| t.adjusted)
            .collect()
    }

    #[test]
    fn intensifier_doubles() {
        let lex = lexicon(&[("جميلة", Polarity::Po), ("قذر", Polarity::Ng)]);
        assert_eq!(adjusted("هذه المرأة جميلة اوي", &lex), vec![0, 0, 2, 0]);
        assert_eq!(adjusted("هذا المكان قذر جدا", &lex), vec![0, 0, -2, 0]);
    }

    #[test]
    fn negator_flips() {
        let lex = lexicon(&[("احب", Polarity::Po)]);
        assert_eq!(adjusted("انا لا احب هذا الكتاب", &lex), vec![0, 0, -1, 0, 0]);
        assert_eq!(adjusted("انا احب هذا الكتاب", &lex), vec![0, 1, 0, 0]);
    }

    #[test]
    fn negation_window_is_bounded() {
        let lex = lexicon(&[("جميل", Polarity::Po)]);
        // negator 3 tokens before: flipped; 4 before: not
        assert_eq!(adjusted("مش ا ب جميل", &lex)[3], -1);
        assert_eq!(adjusted("مش ا ب ت جميل", &lex)[4], 1);
        // negator after the word does nothing
        assert_eq!(adjusted("جميل مش", &lex)[0], 1);
    }

    #[test]
    fn negated_and_intensified() {
        let lex = lexicon(&[("جميل", Polarity::Po)]);
        assert_eq!(adjusted("مش جميل اوي", &lex)[1], -2);
    }

    #[test]
    fn neutral_words_have_zero_base() {
        let lex = lexicon(&[("عادي", Polarity::Nu)]);
        let scored = score_tokens(
            &tokenize("عادي جدا"),
            &lex,
            &cues(),
            &ShifterConfig::default(),
        );
        assert_eq!(scored[0].base, 0);
        assert_eq!(scored[0].adjusted, 0);
        assert!(scored[0].neutral);
    }

    fn tagged(words: &[(&str, PosTag)]) -> Sentence {
        let mut s = Sentence::from_words(words.iter().map(|(w, _)| *w));
        for (t, (_, tag)) in s.tokens.iter_mut().zip(words) {
            t.tag = *tag;
        }
        s
    }

    #[test]
    fn conflict_bigrams() {
        let lex = lexicon(&[
            ("خدمة", Polarity::Po),
            ("سيئة", Polarity::Ng),
            ("فساد", Polarity::Ng),
            ("أخلاقي", Polarity::Po),
            ("منظر", Polarity::Po),
            ("جميل", Polarity::Po),
        ]);
        let cfg = ShifterConfig::default();
        for words in [
            [("خدمة", PosTag::NN), ("سيئة", PosTag::JJ)],
            [("فساد", PosTag::NN), ("اخلاقي", PosTag::JJ)],
        ] {
            let s = tagged(&words);
            let (count, scored) = detect_conflict_phrases(&score_tokens(&s, &lex, &cues(), &cfg));
            assert_eq!(count, 1);
            assert_eq!(scored.iter().map(|t| t.adjusted as i32).sum::<i32>(), -1);
            assert_eq!(scored[0].adjusted, -1);
            assert_eq!(scored[1].adjusted, 0);
        }
        let s = tagged(&[("منظر", PosTag::NN), ("جميل", PosTag::JJ)]);
        let (count, scored) = detect_conflict_phrases(&score_tokens(&s, &lex, &cues(), &cfg));
        assert_eq!(count, 0);
        assert_eq!(
            scored.iter().map(|t| t.adjusted).collect::<Vec<_>>(),
            vec![1, 1]
        );
        // opposite signs but not a noun/adjective pair
        let s = tagged(&[("خدمة", PosTag::VB), ("سيئة", PosTag::JJ)]);
        let (count, _) = detect_conflict_phrases(&score_tokens(&s, &lex, &cues(), &cfg));
        assert_eq!(count, 0);
    }

    #[test]
    fn conflicts_do_not_overlap() {
        let lex = lexicon(&[("خدمة", Polarity::Po), ("سيئة", Polarity::Ng)]);
        let s = tagged(&[
            ("خدمة", PosTag::NN),
            ("سيئة", PosTag::JJ),
            ("خدمة", PosTag::NN),
        ]);
        let (count, scored) =
            detect_conflict_phrases(&score_tokens(&s, &lex, &cues(), &ShifterConfig::default()));
        assert_eq!(count, 1);
        assert_eq!(
            scored.iter().map(|t| t.adjusted).collect::<Vec<_>>(),
            vec![-1, 0, 1]
        );
    }

    fn idioms() -> IdiomLexicon {
        let mut lex = IdiomLexicon::new();
        lex.insert(IdiomEntry::new("تسليم القط مفتاح الكرار", Polarity::Ng).unwrap())
            .unwrap();
        lex.insert(IdiomEntry::new("زي الفل", Polarity::Po).unwrap())
            .unwrap();
        lex
    }

    #[test]
    fn masks_idioms() {
        let sentences = segment("تسليم السلطة للبرلمان تعني تسليم القط مفتاح الكرار");
        let (masked, counts) = mask_idioms(&sentences, &idioms());
        assert_eq!(
            masked[0].surfaces(),
            vec!["تسليم", "السلطة", "للبرلمان", "تعني", "NG_Phrase"]
        );
        assert_eq!(masked[0].tokens[4].position, 5);
        assert_eq!(
            counts,
            PhraseCounts {
                po_phrases: 0,
                ng_phrases: 1
            }
        );

        let (masked, counts) = mask_idioms(&segment("الاكل زي الفل"), &idioms());
        assert_eq!(masked[0].surfaces(), vec!["الاكل", "PO_Phrase"]);
        assert_eq!(counts.po_phrases, 1);

        let plain = segment("الاكل جميل");
        let (masked, counts) = mask_idioms(&plain, &idioms());
        assert_eq!(masked, plain);
        assert_eq!(counts, PhraseCounts::default());
    }

    fn analyzer_parts() -> (
        SentimentLexicon,
        IdiomLexicon,
        CueLists,
        StopWords,
        TableTagger,
    ) {
        let lex = lexicon(&[
            ("رائع", Polarity::Po),
            ("ملل", Polarity::Ng),
            ("احب", Polarity::Po),
            ("جميلة", Polarity::Po),
            ("عادي", Polarity::Nu),
        ]);
        let tagger = TableTagger::new(HashMap::from([("ملل".to_string(), PosTag::NN)]))
            .with_lexicon_defaults(&lex);
        (lex, idioms(), cues(), StopWords::new(), tagger)
    }

    #[test]
    fn position_features() {
        let (lex, idioms, cues, stop, tagger) = analyzer_parts();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        let v = a
            .extract_features("هذا المسلسل رائع لكن يوجد ملل في بعض حلقاته")
            .unwrap();
        assert_eq!(v.get(slot::NO_OF_WORDS), 9.0);
        assert!((v.get(slot::PO_W_POSITION) - 3.0).abs() < 1e-12);
        assert!((v.get(slot::NG_W_POSITION) - 1.5).abs() < 1e-12);
        assert_eq!(v.get(slot::W_PO), 1.0);
        assert_eq!(v.get(slot::W_NG), 1.0);
    }

    #[test]
    fn empty_topic_is_all_zero() {
        let (lex, idioms, cues, stop, tagger) = analyzer_parts();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        assert!(a.extract_features("").unwrap().is_empty());
        assert!(a.extract_features("123 !!").unwrap().is_empty());
    }

    #[test]
    fn negation_features() {
        let (lex, idioms, cues, stop, tagger) = analyzer_parts();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        let v = a.extract_features("انا لا احب هذا الكتاب").unwrap();
        assert_eq!(v.get(slot::IS_NEGATION), 1.0);
        assert_eq!(v.get(slot::N_O_NEGATION), 1.0);
        assert_eq!(v.get(slot::W_NG), 1.0);
        assert_eq!(v.get(slot::W_PO), 0.0);
        assert_eq!(v.get(slot::HAS_NG_SENTI), 1.0);
        assert_eq!(v.get(slot::HAS_PO_SENTI), 0.0);
    }

    #[test]
    fn question_wishful_and_neutral_slots() {
        let (lex, idioms, cues, stop, tagger) = analyzer_parts();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        let v = a
            .extract_features("هل المكان عادي؟ يا رب يكون رائع. يارب")
            .unwrap();
        assert_eq!(v.get(slot::IS_QUESTION), 1.0);
        assert_eq!(v.get(slot::N_O_QUESTION), 1.0);
        assert_eq!(v.get(slot::IS_WISHFUL), 1.0);
        assert_eq!(v.get(slot::N_O_WISHFUL), 2.0);
        assert_eq!(v.get(slot::W_NU), 1.0);
    }

    #[test]
    fn rule_scores() {
        let (lex, idioms, cues, stop, tagger) = analyzer_parts();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        let r = a
            .lexicon_rule_score("تسليم القط مفتاح الكرار رائع")
            .unwrap();
        assert_eq!(r.net, -2.0);
        assert_eq!(r.label, Polarity::Ng);
        let r = a.lexicon_rule_score("كلام بلا معني").unwrap();
        assert_eq!((r.net, r.label), (0.0, Polarity::Nu));
        let r = a.lexicon_rule_score("هذه المرأة جميلة اوي").unwrap();
        assert_eq!((r.net, r.label), (2.0, Polarity::Po));
    }

    #[test]
    fn idiom_tokens_do_not_double_count() {
        let mut lex = lexicon(&[("القط", Polarity::Po)]);
        lex.insert(LexiconEntry::new("مفتاح", Polarity::Ng))
            .unwrap();
        let (_, idioms, cues, stop, _) = analyzer_parts();
        let tagger = TableTagger::default();
        let a = Analyzer::new(&lex, &idioms, &cues, &stop, &tagger);
        let v = a.extract_features("تسليم القط مفتاح الكرار").unwrap();
        assert_eq!(v.get(slot::HAS_NG_PH), 1.0);
        assert_eq!(v.get(slot::W_PO), 0.0);
        assert_eq!(v.get(slot::W_NG), 0.0);
        assert_eq!(v.get(slot::NO_OF_WORDS), 1.0);
    }

    #[test]
    #[should_panic]
    fn slot_out_of_range_panics() {
        FeatureVector::new().set(18, 1.0);
    }

    #[test]
    fn cue_set_rejects_duplicates() {
        assert_eq!(CueSet::from_terms(["جدا", "جداً"]).unwrap_err(), "جدا");
    }
}
