//! Text normalization shared by indexing and querying.
//!
//! The pipeline is `tokenize -> remove_stopwords -> stem`, with positions
//! assigned over the surviving tokens so that query positions and indexed
//! postings line up exactly.

mod porter;
mod stopwords;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use porter::porter_stem;
pub use stopwords::DEFAULT_STOPWORDS;

/// One kept token of a preprocessed text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub stem: String,
    pub position: u32,
}

/// A set of lowercase stop words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopwordSet {
    words: BTreeSet<String>,
}

impl StopwordSet {
    pub fn empty() -> Self {
        Self {
            words: BTreeSet::new(),
        }
    }

    /// Builds a set, lowercasing every word.
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// Parses a stop-list file body: one word per line, `#` starts a comment.
    pub fn parse(body: &str) -> Self {
        Self::new(body.lines().map(|line| match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        }))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path).map_err(|source| Error::Io {
            context: format!("reading stop list {}", path.display()),
            source,
        })?;
        Ok(Self::parse(&body))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

impl Default for StopwordSet {
    fn default() -> Self {
        Self::new(DEFAULT_STOPWORDS.iter())
    }
}

/// A sentence cut from a document body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSpan {
    pub text: String,
    pub ordinal: u32,
}

impl SentenceSpan {
    pub fn new(text: impl Into<String>, ordinal: u32) -> Self {
        Self {
            text: text.into(),
            ordinal,
        }
    }
}

/// Lowercased maximal runs of letters and digits, in source order.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|run| !run.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn remove_stopwords(tokens: Vec<String>, stops: &StopwordSet) -> Vec<String> {
    tokens.into_iter().filter(|t| !stops.contains(t)).collect()
}

/// Porter stemming iterated to a fixed point, so that `stem(stem(x)) == stem(x)`.
pub fn stem(token: &str) -> String {
    let mut current = porter_stem(token);
    loop {
        let next = porter_stem(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Full pipeline. A token is dropped when either its surface form or its
/// stem is a stop word; positions run 0..n over what remains.
pub fn preprocess(text: &str, stops: &StopwordSet) -> Vec<Token> {
    remove_stopwords(tokenize(text), stops)
        .into_iter()
        .filter_map(|surface| {
            let stem = stem(&surface);
            (!stops.contains(&stem)).then_some((surface, stem))
        })
        .enumerate()
        .map(|(i, (surface, stem))| Token {
            surface,
            stem,
            position: i as u32,
        })
        .collect()
}

/// Stems of [`preprocess`], without positions.
pub fn preprocess_stems(text: &str, stops: &StopwordSet) -> Vec<String> {
    preprocess(text, stops)
        .into_iter()
        .map(|t| t.stem)
        .collect()
}

const ABBREVIATIONS: [&str; 5] = ["mr", "dr", "etc", "e.g", "i.e"];

/// Rule-based sentence splitter.
///
/// A sentence ends at `.`, `!` or `?` when the next character is whitespace
/// or the end of the text, unless the `.` closes one of a few common
/// abbreviations. Spans are trimmed and empty spans are dropped.
pub fn split_sentences(body: &str) -> Vec<SentenceSpan> {
    let mut spans = Vec::new();
    let mut start = 0;
    let mut chars = body.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let at_boundary = match chars.peek() {
            None => true,
            Some((_, next)) => next.is_whitespace(),
        };
        if !at_boundary || (c == '.' && ends_with_abbreviation(&body[start..i])) {
            continue;
        }
        let end = i + c.len_utf8();
        push_span(&mut spans, &body[start..end]);
        start = end;
    }
    push_span(&mut spans, &body[start..]);
    spans
}

fn ends_with_abbreviation(prefix: &str) -> bool {
    let word = prefix
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or("")
        .trim_start_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

fn push_span(spans: &mut Vec<SentenceSpan>, raw: &str) {
    let text = raw.trim();
    if !text.is_empty() {
        let ordinal = spans.len() as u32;
        spans.push(SentenceSpan::new(text, ordinal));
    }
}
