//! Corpus files to frozen indexes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use log::warn;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::index::{IndexBuilder, InvertedIndex, ItemRecord};
use crate::sentence_expansion::{build_sentence_repository, parse_topics, TopicClass};
use crate::text::StopwordSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Tweets,
    Documents,
}

impl fmt::Display for CorpusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusKind::Tweets => "tweets",
            CorpusKind::Documents => "documents",
        })
    }
}

impl FromStr for CorpusKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tweets" => Ok(Self::Tweets),
            "documents" => Ok(Self::Documents),
            _ => Err(Error::InvalidParameter(format!(
                "unknown corpus kind `{s}`"
            ))),
        }
    }
}

#[derive(Deserialize)]
struct TweetLine {
    id: String,
    text: String,
    timestamp: i64,
    retweets: u64,
    quotes: u64,
    replies: u64,
}

#[derive(Deserialize)]
struct DocumentLine {
    id: String,
    title: String,
    body: String,
}

/// A record left out of the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skip {
    /// 1-based line in the input file
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildReport {
    pub kind: CorpusKind,
    pub items: usize,
    pub vocabulary: usize,
    pub skipped: Vec<Skip>,
    /// sentence repository size, documents only
    pub sentences: Option<usize>,
    pub sentence_vocabulary: Option<usize>,
    /// documents that yielded no sentence with content terms
    pub sentenceless_documents: Vec<String>,
}

impl fmt::Display for BuildReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "items: {}", self.items)?;
        writeln!(f, "vocabulary: {}", self.vocabulary)?;
        if let (Some(n), Some(v)) = (self.sentences, self.sentence_vocabulary) {
            writeln!(f, "sentences: {n}")?;
            writeln!(f, "sentence vocabulary: {v}")?;
        }
        writeln!(f, "skipped: {}", self.skipped.len())?;
        for s in &self.skipped {
            writeln!(f, "  line {}: {}", s.line, s.reason)?;
        }
        for d in &self.sentenceless_documents {
            writeln!(f, "  document {d}: no sentences")?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub index: InvertedIndex,
    /// present for document corpora
    pub sentences: Option<InvertedIndex>,
    pub report: BuildReport,
}

fn parse_record(kind: CorpusKind, line: &str) -> std::result::Result<ItemRecord, String> {
    match kind {
        CorpusKind::Tweets => {
            let t: TweetLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
            Ok(ItemRecord::tweet(
                t.id,
                t.text,
                t.timestamp,
                t.retweets,
                t.quotes,
                t.replies,
            ))
        }
        CorpusKind::Documents => {
            let d: DocumentLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
            Ok(ItemRecord::document(d.id, d.title, d.body))
        }
    }
}

/// Indexes a line-delimited corpus held in memory.
///
/// Bad lines are skipped with a warning; a corpus with no valid record is
/// an error. Document corpora also get a sentence repository, classified
/// by `topics` (which may be empty).
pub fn ingest_str(
    body: &str,
    kind: CorpusKind,
    topics: &[TopicClass],
    stops: &StopwordSet,
) -> Result<Ingested> {
    let mut builder = IndexBuilder::new();
    let mut skipped = Vec::new();
    for (n, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let outcome = parse_record(kind, line)
            .and_then(|rec| builder.add_item(rec, stops).map_err(|e| e.to_string()));
        if let Err(reason) = outcome {
            warn!("line {}: skipped: {reason}", n + 1);
            skipped.push(Skip {
                line: n + 1,
                reason,
            });
        }
    }
    if builder.is_empty() {
        return Err(Error::Corpus(format!("no valid {kind} records")));
    }
    let index = builder.freeze();
    let mut report = BuildReport {
        kind,
        items: index.len(),
        vocabulary: index.vocabulary_size(),
        skipped,
        sentences: None,
        sentence_vocabulary: None,
        sentenceless_documents: Vec::new(),
    };
    let sentences = match kind {
        CorpusKind::Tweets => None,
        CorpusKind::Documents => {
            let (repo, rep) = build_sentence_repository(&index, topics, stops)?;
            report.sentences = Some(rep.sentences);
            report.sentence_vocabulary = Some(repo.vocabulary_size());
            report.sentenceless_documents = rep.skipped_documents;
            Some(repo)
        }
    };
    Ok(Ingested {
        index,
        sentences,
        report,
    })
}

pub fn ingest(
    path: &Path,
    kind: CorpusKind,
    topics_path: Option<&Path>,
    stops: &StopwordSet,
) -> Result<Ingested> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading corpus {}", path.display()), e))?;
    let topics = match topics_path {
        Some(p) => {
            if kind == CorpusKind::Tweets {
                warn!("topics file ignored for a tweet corpus");
            }
            let t = std::fs::read_to_string(p)
                .map_err(|e| Error::io(format!("reading topics {}", p.display()), e))?;
            parse_topics(&t)?
        }
        None => Vec::new(),
    };
    ingest_str(&body, kind, &topics, stops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::ItemMeta;

    fn stops() -> StopwordSet {
        StopwordSet::default()
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(
            ingest_str("", CorpusKind::Tweets, &[], &stops()),
            Err(Error::Corpus(_))
        ));
        assert!(ingest_str("\n\n", CorpusKind::Documents, &[], &stops()).is_err());
    }

    #[test]
    fn malformed_line_is_skipped_with_its_number() {
        let body = r#"{"id":"1","text":"storm warning","timestamp":10,"retweets":1,"quotes":0,"replies":0}
{"id":"2","text":"storm damage","timestamp":20,"retweets":0,"quotes":0,"replies":0}
{"id":"3","text":broken
{"id":"4","text":"power outage","timestamp":30,"retweets":0,"quotes":2,"replies":1}
"#;
        let out = ingest_str(body, CorpusKind::Tweets, &[], &stops()).unwrap();
        assert_eq!(out.index.len(), 3);
        assert_eq!(out.report.skipped.len(), 1);
        assert_eq!(out.report.skipped[0].line, 3);
        assert!(out.sentences.is_none());
    }

    #[test]
    fn bad_values_and_duplicates_are_skipped() {
        let body = r#"{"id":"1","text":"storm","timestamp":10,"retweets":-1,"quotes":0,"replies":0}
{"id":"2","text":"storm","timestamp":10,"retweets":0,"quotes":0,"replies":0}
{"id":"2","text":"again","timestamp":10,"retweets":0,"quotes":0,"replies":0}
{"id":"3","text":"the of","timestamp":10,"retweets":0,"quotes":0,"replies":0}
{"id":"4","text":"storm","timestamp":10,"retweets":0,"quotes":0}
"#;
        let out = ingest_str(body, CorpusKind::Tweets, &[], &stops()).unwrap();
        assert_eq!(out.index.len(), 1);
        let lines: Vec<usize> = out.report.skipped.iter().map(|s| s.line).collect();
        assert_eq!(lines, [1, 3, 4, 5]);
    }

    #[test]
    fn documents_build_a_sentence_repository() {
        // 2 + 3 sentences
        let body = r#"{"id":"a","title":"Solar","body":"Solar panels convert light. Batteries store the energy."}
{"id":"b","title":"Wind","body":"Wind turbines spin. Dr. Smith measured output! Is it efficient?"}
"#;
        let topics = vec![TopicClass::new("energy", ["solar", "wind", "battery"]).unwrap()];
        let out = ingest_str(body, CorpusKind::Documents, &topics, &stops()).unwrap();
        let expected: usize = body
            .lines()
            .map(|l| {
                let v: serde_json::Value = serde_json::from_str(l).unwrap();
                crate::text::split_sentences(v["body"].as_str().unwrap()).len()
            })
            .sum();
        assert_eq!(expected, 5);
        let repo = out.sentences.unwrap();
        assert_eq!(repo.len(), expected);
        assert_eq!(out.report.sentences, Some(5));
        let first = repo.item_by_external("a#0").unwrap();
        match &first.meta {
            ItemMeta::Sentence { topics, .. } => assert_eq!(topics, &["energy"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn report_renders_skips() {
        let body = "nope\n{\"id\":\"a\",\"title\":\"\",\"body\":\"Rain today.\"}\n";
        let out = ingest_str(body, CorpusKind::Documents, &[], &stops()).unwrap();
        let text = out.report.to_string();
        assert!(text.contains("items: 1"));
        assert!(text.contains("line 1:"));
        assert!(text.contains("sentences: 1"));
    }
}
