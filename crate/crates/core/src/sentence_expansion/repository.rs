use std::collections::BTreeSet;

use log::warn;

use super::topics::{classify_stems, TopicClass};
use crate::error::Result;
use crate::index::{
    IndexBuilder, IndexedItem, InvertedIndex, ItemId, ItemKind, ItemMeta, ItemRecord,
};
use crate::text::{preprocess, split_sentences, StopwordSet, Token};

/// One extracted sentence before it enters the repository index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceEntry {
    pub parent_doc: ItemId,
    pub ordinal: u32,
    pub text: String,
    pub tokens: Vec<Token>,
    pub topics: BTreeSet<String>,
}

impl SentenceEntry {
    pub fn stems(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.stem.as_str()).collect()
    }
}

/// Topic names assigned to a sentence.
pub fn classify_sentence(sentence: &SentenceEntry, topics: &[TopicClass]) -> BTreeSet<String> {
    classify_stems(&sentence.stems(), topics)
}

/// Splits one document into classified sentences. Sentences with no
/// content terms are dropped.
pub fn extract_sentences(
    doc: &IndexedItem,
    topics: &[TopicClass],
    stops: &StopwordSet,
) -> Vec<SentenceEntry> {
    split_sentences(&doc.text)
        .into_iter()
        .filter_map(|span| {
            let tokens = preprocess(&span.text, stops);
            if tokens.is_empty() {
                return None;
            }
            let mut entry = SentenceEntry {
                parent_doc: doc.item_id,
                ordinal: span.ordinal,
                text: span.text,
                tokens,
                topics: BTreeSet::new(),
            };
            entry.topics = classify_sentence(&entry, topics);
            Some(entry)
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepositoryReport {
    pub sentences: usize,
    /// external ids of documents that produced no sentence
    pub skipped_documents: Vec<String>,
}

/// Builds the sentence-kind index from every document item of `docs`.
///
/// Sentence external ids are `<document id>#<ordinal>`.
pub fn build_sentence_repository(
    docs: &InvertedIndex,
    topics: &[TopicClass],
    stops: &StopwordSet,
) -> Result<(InvertedIndex, RepositoryReport)> {
    let mut builder = IndexBuilder::new();
    let mut report = RepositoryReport::default();
    for doc in docs
        .items()
        .iter()
        .filter(|d| d.kind() == ItemKind::Document)
    {
        let entries = extract_sentences(doc, topics, stops);
        if entries.is_empty() {
            warn!(
                "document {} has no sentences with content terms; skipped",
                doc.external_id
            );
            report.skipped_documents.push(doc.external_id.clone());
            continue;
        }
        for entry in entries {
            let record = ItemRecord {
                external_id: format!("{}#{}", doc.external_id, entry.ordinal),
                text: entry.text,
                meta: ItemMeta::Sentence {
                    parent_doc: doc.item_id,
                    ordinal: entry.ordinal,
                    topics: entry.topics.into_iter().collect(),
                },
            };
            builder.add_tokens(record, &entry.tokens)?;
            report.sentences += 1;
        }
    }
    Ok((builder.freeze(), report))
}
