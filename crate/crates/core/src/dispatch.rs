//! Query-length routing between the tweet ranker and sentence-level
//! expansion.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::text::{preprocess_stems, StopwordSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RetrievalPath {
    Tweet,
    Slrs,
}

impl fmt::Display for RetrievalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RetrievalPath::Tweet => "TWEET",
            RetrievalPath::Slrs => "SLRS",
        })
    }
}

/// Whether a query exactly at the threshold length counts as short.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    /// `l_q <= l_t` is short
    #[default]
    Inclusive,
    /// `l_q < l_t` is short
    Strict,
}

impl FromStr for ThresholdRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "inclusive" | "le" | "<=" => Ok(Self::Inclusive),
            "strict" | "lt" | "<" => Ok(Self::Strict),
            _ => Err(Error::InvalidParameter(format!(
                "unknown dispatch rule `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DispatchConfig {
    tweet_length_threshold: usize,
    rule: ThresholdRule,
}

impl DispatchConfig {
    pub fn new(tweet_length_threshold: usize, rule: ThresholdRule) -> Result<Self> {
        if tweet_length_threshold == 0 {
            return Err(Error::InvalidParameter(
                "tweet length threshold must be at least 1".into(),
            ));
        }
        Ok(Self {
            tweet_length_threshold,
            rule,
        })
    }

    pub fn tweet_length_threshold(&self) -> usize {
        self.tweet_length_threshold
    }

    pub fn route(&self, query_length: usize) -> RetrievalPath {
        let short = match self.rule {
            ThresholdRule::Inclusive => query_length <= self.tweet_length_threshold,
            ThresholdRule::Strict => query_length < self.tweet_length_threshold,
        };
        if short {
            RetrievalPath::Tweet
        } else {
            RetrievalPath::Slrs
        }
    }
}

impl Default for DispatchConfig {
    fn default() -> Self {
        Self {
            tweet_length_threshold: 3,
            rule: ThresholdRule::Inclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub raw: String,
    pub stems: Vec<String>,
    pub path: RetrievalPath,
}

/// Preprocesses the query and picks a path from its stem count.
pub fn query_scanner(
    query: &str,
    cfg: &DispatchConfig,
    stops: &StopwordSet,
) -> Result<QueryRecord> {
    let stems = preprocess_stems(query, stops);
    if stems.is_empty() {
        return Err(Error::EmptyQuery);
    }
    Ok(QueryRecord {
        raw: query.to_string(),
        path: cfg.route(stems.len()),
        stems,
    })
}
