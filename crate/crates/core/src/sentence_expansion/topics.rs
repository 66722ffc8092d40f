use std::collections::BTreeSet;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::text::{stem, tokenize};

/// A named topic defined by keyword stems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicClass {
    pub name: String,
    pub keyword_tags: BTreeSet<String>,
}

impl TopicClass {
    /// Builds a topic from raw keywords, which are tokenized and stemmed.
    pub fn new<I, S>(name: impl Into<String>, keywords: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let keyword_tags: BTreeSet<String> = keywords
            .into_iter()
            .flat_map(|k| tokenize(k.as_ref()))
            .map(|t| stem(&t))
            .collect();
        if keyword_tags.is_empty() {
            return Err(Error::Corpus(format!("topic `{name}` has no keywords")));
        }
        Ok(Self { name, keyword_tags })
    }

    pub fn matches<S: AsRef<str>>(&self, stems: &[S]) -> bool {
        stems.iter().any(|s| self.keyword_tags.contains(s.as_ref()))
    }
}

#[derive(Deserialize)]
struct TopicLine {
    name: String,
    keywords: Vec<String>,
}

/// Parses a topic file: one `{"name": .., "keywords": [..]}` record per line.
pub fn parse_topics(body: &str) -> Result<Vec<TopicClass>> {
    let mut topics: Vec<TopicClass> = Vec::new();
    for (n, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: TopicLine = serde_json::from_str(line)
            .map_err(|e| Error::Corpus(format!("topics line {}: {e}", n + 1)))?;
        if topics.iter().any(|t| t.name == record.name) {
            return Err(Error::Corpus(format!(
                "topics line {}: duplicate topic `{}`",
                n + 1,
                record.name
            )));
        }
        topics.push(TopicClass::new(record.name, record.keywords)?);
    }
    Ok(topics)
}

/// Names of every topic whose tags intersect `stems`.
pub fn classify_stems<S: AsRef<str>>(stems: &[S], topics: &[TopicClass]) -> BTreeSet<String> {
    topics
        .iter()
        .filter(|t| t.matches(stems))
        .map(|t| t.name.clone())
        .collect()
}
