//! Corpus file: one JSON object per line,
//! `{"id": "...", "text": "...", "label": "PO"|"NG", "genre": "tweet"|"hotel"|"product"|"tv"}`
//! with `label` and `genre` optional.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::lexicon::Polarity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genre {
    Tweet,
    Hotel,
    Product,
    Tv,
}

impl Genre {
    pub const ALL: [Genre; 4] = [Genre::Tweet, Genre::Hotel, Genre::Product, Genre::Tv];

    /// Row label used in metric reports.
    pub fn report_name(self) -> &'static str {
        match self {
            Genre::Tweet => "Tweets",
            Genre::Hotel => "Hotel res.",
            Genre::Product => "Product rev.",
            Genre::Tv => "TV prog. comm.",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Genre::Tweet => "tweet",
            Genre::Hotel => "hotel",
            Genre::Product => "product",
            Genre::Tv => "tv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Polarity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genre: Option<Genre>,
}

impl Topic {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Topic {
            id: id.into(),
            text: text.into(),
            label: None,
            genre: None,
        }
    }

    pub fn labeled(mut self, label: Polarity) -> Self {
        self.label = Some(label);
        self
    }

    pub fn with_genre(mut self, genre: Genre) -> Self {
        self.genre = Some(genre);
        self
    }
}

pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Topic>, EvalError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = fs::File::open(path).map_err(|source| EvalError::Io {
        path: name.clone(),
        source,
    })?;
    parse_corpus(BufReader::new(file), &name)
}

pub(crate) fn parse_corpus(reader: impl BufRead, name: &str) -> Result<Vec<Topic>, EvalError> {
    let mut topics = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| EvalError::Io {
            path: name.to_owned(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let topic: Topic = serde_json::from_str(&line).map_err(|e| EvalError::Parse {
            path: name.to_owned(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        if topic.label == Some(Polarity::Nu) {
            return Err(EvalError::Parse {
                path: name.to_owned(),
                line: i + 1,
                reason: "topic labels are PO or NG".into(),
            });
        }
        if !seen.insert(topic.id.clone()) {
            return Err(EvalError::DuplicateTopicId {
                path: name.to_owned(),
                line: i + 1,
                id: topic.id,
            });
        }
        topics.push(topic);
    }
    Ok(topics)
}

pub fn write_corpus(topics: &[Topic], path: impl AsRef<Path>) -> Result<(), EvalError> {
    let path = path.as_ref();
    let io = |source| EvalError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = BufWriter::new(fs::File::create(path).map_err(io)?);
    for t in topics {
        let line = serde_json::to_string(t).expect("topic serializes");
        writeln!(out, "{line}").map_err(io)?;
    }
    out.flush().map_err(io)
}
