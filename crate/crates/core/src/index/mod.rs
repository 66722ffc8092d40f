//! Positional inverted index.
//!
//! Items are added through an [`IndexBuilder`]; [`IndexBuilder::freeze`]
//! turns it into an immutable [`InvertedIndex`] that answers every read.
//! Tweets, documents and sentences all live in the same structure and are
//! told apart by their [`ItemMeta`].

mod persist;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{preprocess, StopwordSet, Token};

pub use persist::FORMAT_VERSION;

/// Dense internal item id, assigned from 0 in insertion order.
pub type ItemId = u32;
/// Dense term id, assigned in lexicographic term order at freeze time.
pub type TermId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemKind {
    Tweet,
    Document,
    Sentence,
}

impl std::fmt::Display for ItemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ItemKind::Tweet => "tweet",
            ItemKind::Document => "document",
            ItemKind::Sentence => "sentence",
        })
    }
}

/// Kind-specific metadata carried by every item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "metadata", rename_all = "lowercase")]
pub enum ItemMeta {
    Tweet {
        /// seconds since the epoch
        timestamp: i64,
        retweets: u64,
        quotes: u64,
        replies: u64,
    },
    Document {
        title: String,
    },
    Sentence {
        parent_doc: ItemId,
        ordinal: u32,
        topics: Vec<String>,
    },
}

impl ItemMeta {
    pub fn kind(&self) -> ItemKind {
        match self {
            ItemMeta::Tweet { .. } => ItemKind::Tweet,
            ItemMeta::Document { .. } => ItemKind::Document,
            ItemMeta::Sentence { .. } => ItemKind::Sentence,
        }
    }
}

/// An item as handed to the builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemRecord {
    pub external_id: String,
    pub text: String,
    pub meta: ItemMeta,
}

impl ItemRecord {
    pub fn tweet(
        external_id: impl Into<String>,
        text: impl Into<String>,
        timestamp: i64,
        retweets: u64,
        quotes: u64,
        replies: u64,
    ) -> Self {
        Self {
            external_id: external_id.into(),
            text: text.into(),
            meta: ItemMeta::Tweet {
                timestamp,
                retweets,
                quotes,
                replies,
            },
        }
    }

    pub fn document(
        external_id: impl Into<String>,
        title: impl Into<String>,
        body: impl Into<String>,
    ) -> Self {
        Self {
            external_id: external_id.into(),
            text: body.into(),
            meta: ItemMeta::Document {
                title: title.into(),
            },
        }
    }
}

/// A stored item with its length statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedItem {
    pub item_id: ItemId,
    pub external_id: String,
    #[serde(flatten)]
    pub meta: ItemMeta,
    pub text: String,
    /// kept token count (l)
    pub length: u32,
    /// distinct stem count (m)
    pub unique: u32,
}

impl IndexedItem {
    pub fn kind(&self) -> ItemKind {
        self.meta.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Posting {
    pub item_id: ItemId,
    /// strictly increasing token ordinals
    pub positions: Vec<u32>,
}

impl Posting {
    pub fn term_frequency(&self) -> u32 {
        self.positions.len() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorpusStats {
    pub item_count: u32,
    pub avg_length: f64,
    pub avg_unique: f64,
    pub total_tokens: u64,
}

impl CorpusStats {
    fn from_items(items: &[IndexedItem]) -> Self {
        let item_count = items.len() as u32;
        let total_tokens: u64 = items.iter().map(|i| u64::from(i.length)).sum();
        let total_unique: u64 = items.iter().map(|i| u64::from(i.unique)).sum();
        let (avg_length, avg_unique) = if item_count == 0 {
            (0.0, 0.0)
        } else {
            let n = f64::from(item_count);
            (total_tokens as f64 / n, total_unique as f64 / n)
        };
        Self {
            item_count,
            avg_length,
            avg_unique,
            total_tokens,
        }
    }
}

/// Write side of the index lifecycle.
#[derive(Debug, Default)]
pub struct IndexBuilder {
    items: Vec<IndexedItem>,
    external: HashMap<String, ItemId>,
    postings: BTreeMap<String, Vec<Posting>>,
}

impl IndexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Preprocesses `record.text` and indexes it, returning its dense id.
    pub fn add_item(&mut self, record: ItemRecord, stops: &StopwordSet) -> Result<ItemId> {
        let tokens = preprocess(&record.text, stops);
        self.add_tokens(record, &tokens)
    }

    /// Indexes an already preprocessed token list for `record`.
    pub fn add_tokens(&mut self, record: ItemRecord, tokens: &[Token]) -> Result<ItemId> {
        if self.external.contains_key(&record.external_id) {
            return Err(Error::DuplicateId(record.external_id));
        }
        if tokens.is_empty() {
            return Err(Error::EmptyItem(record.external_id));
        }
        let item_id = ItemId::try_from(self.items.len())
            .map_err(|_| Error::InvalidParameter("too many items".into()))?;

        let mut by_term: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
        for token in tokens {
            by_term.entry(&token.stem).or_default().push(token.position);
        }
        for (term, mut positions) in by_term.iter().map(|(t, p)| (*t, p.clone())) {
            positions.sort_unstable();
            positions.dedup();
            self.postings
                .entry(term.to_string())
                .or_default()
                .push(Posting { item_id, positions });
        }

        self.external.insert(record.external_id.clone(), item_id);
        self.items.push(IndexedItem {
            item_id,
            external_id: record.external_id,
            meta: record.meta,
            text: record.text,
            length: tokens.len() as u32,
            unique: by_term.len() as u32,
        });
        Ok(item_id)
    }

    pub fn freeze(self) -> InvertedIndex {
        InvertedIndex::assemble(self.items, self.postings)
    }
}

/// Frozen, read-only index. Shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    terms: Vec<String>,
    term_ids: HashMap<String, TermId>,
    postings: Vec<Vec<Posting>>,
    collection_freq: Vec<u64>,
    items: Vec<IndexedItem>,
    external: HashMap<String, ItemId>,
    /// per item: (term, tf) sorted by term id
    forward: Vec<Vec<(TermId, u32)>>,
    stats: CorpusStats,
}

impl InvertedIndex {
    pub fn empty() -> Self {
        IndexBuilder::new().freeze()
    }

    fn assemble(items: Vec<IndexedItem>, postings: BTreeMap<String, Vec<Posting>>) -> Self {
        let mut terms = Vec::with_capacity(postings.len());
        let mut term_ids = HashMap::with_capacity(postings.len());
        let mut lists = Vec::with_capacity(postings.len());
        let mut collection_freq = Vec::with_capacity(postings.len());
        let mut forward = vec![Vec::new(); items.len()];
        for (tid, (term, mut list)) in postings.into_iter().enumerate() {
            let tid = tid as TermId;
            list.sort_by_key(|p| p.item_id);
            let mut cf = 0u64;
            for p in &list {
                forward[p.item_id as usize].push((tid, p.term_frequency()));
                cf += u64::from(p.term_frequency());
            }
            term_ids.insert(term.clone(), tid);
            terms.push(term);
            lists.push(list);
            collection_freq.push(cf);
        }
        let external = items
            .iter()
            .map(|i| (i.external_id.clone(), i.item_id))
            .collect();
        let stats = CorpusStats::from_items(&items);
        Self {
            terms,
            term_ids,
            postings: lists,
            collection_freq,
            items,
            external,
            forward,
            stats,
        }
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order; the index of each is its [`TermId`].
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term_id(&self, term: &str) -> Option<TermId> {
        self.term_ids.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id as usize]
    }

    /// Postings for `term`, sorted by item id; empty for unknown terms.
    pub fn postings(&self, term: &str) -> &[Posting] {
        self.term_id(term)
            .map_or(&[][..], |tid| self.postings_by_id(tid))
    }

    pub fn postings_by_id(&self, tid: TermId) -> &[Posting] {
        &self.postings[tid as usize]
    }

    pub fn document_frequency(&self, term: &str) -> u32 {
        self.postings(term).len() as u32
    }

    pub fn document_frequency_by_id(&self, tid: TermId) -> u32 {
        self.postings[tid as usize].len() as u32
    }

    /// Total occurrences of the term across the corpus.
    pub fn collection_frequency(&self, tid: TermId) -> u64 {
        self.collection_freq[tid as usize]
    }

    pub fn items(&self) -> &[IndexedItem] {
        &self.items
    }

    pub fn item(&self, id: ItemId) -> Result<&IndexedItem> {
        self.items.get(id as usize).ok_or(Error::UnknownItem(id))
    }

    pub fn item_by_external(&self, external_id: &str) -> Option<&IndexedItem> {
        self.external
            .get(external_id)
            .map(|&id| &self.items[id as usize])
    }

    /// (term id, tf) pairs of one item, sorted by term id.
    pub fn item_terms(&self, id: ItemId) -> Result<&[(TermId, u32)]> {
        self.forward
            .get(id as usize)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownItem(id))
    }

    /// Raw count of `term` in item `id`.
    pub fn tf(&self, term: &str, id: ItemId) -> Result<u32> {
        let terms = self.item_terms(id)?;
        Ok(self
            .term_id(term)
            .and_then(|tid| {
                terms
                    .binary_search_by_key(&tid, |&(t, _)| t)
                    .ok()
                    .map(|i| terms[i].1)
            })
            .unwrap_or(0))
    }

    /// Positions of a term inside one item, if present.
    pub fn positions(&self, tid: TermId, id: ItemId) -> Option<&[u32]> {
        let list = &self.postings[tid as usize];
        list.binary_search_by_key(&id, |p| p.item_id)
            .ok()
            .map(|i| list[i].positions.as_slice())
    }

    /// Items containing at least one of `terms`, ascending.
    pub fn candidates<S: AsRef<str>>(&self, terms: &[S]) -> Vec<ItemId> {
        let mut ids: Vec<ItemId> = terms
            .iter()
            .flat_map(|t| self.postings(t.as_ref()).iter().map(|p| p.item_id))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Items containing every one of `terms`, ascending.
    pub fn conjunctive_candidates<S: AsRef<str>>(&self, terms: &[S]) -> Vec<ItemId> {
        let Some((first, rest)) = terms.split_first() else {
            return Vec::new();
        };
        self.postings(first.as_ref())
            .iter()
            .map(|p| p.item_id)
            .filter(|&id| {
                rest.iter().all(|t| {
                    self.term_id(t.as_ref())
                        .is_some_and(|tid| self.positions(tid, id).is_some())
                })
            })
            .collect()
    }
}
