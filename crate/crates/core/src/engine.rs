//! Loaded indexes plus configuration: the thing the CLI queries.

use std::fmt;
use std::path::{Path, PathBuf};

use log::warn;

use crate::config::EngineConfig;
use crate::dispatch::{query_scanner, DispatchConfig, QueryRecord, RetrievalPath};
use crate::error::{Error, Result};
use crate::index::{InvertedIndex, ItemKind};
use crate::sentence_expansion::{build_sentence_repository, slrs_search, FeedbackGranularity};
use crate::text::StopwordSet;
use crate::tweet_search::rank_tweet_stems;
use crate::weighting::WeightingScheme;

/// Where the sentence repository of a saved document index lives.
pub fn sentences_path(index_path: &Path) -> PathBuf {
    let mut name = index_path.as_os_str().to_owned();
    name.push(".sentences");
    PathBuf::from(name)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub rank: usize,
    pub external_id: String,
    pub score: f64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub query: QueryRecord,
    /// differs from `query.path` when the routed index was not loaded
    pub executed: RetrievalPath,
    pub scheme: WeightingScheme,
    pub expansion: Vec<(String, f64)>,
    pub hits: Vec<Hit>,
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "query: {}", self.query.raw)?;
        writeln!(f, "stems: {}", self.query.stems.join(" "))?;
        if self.executed == self.query.path {
            writeln!(f, "path: {}", self.query.path)?;
        } else {
            writeln!(f, "path: {} (ran {})", self.query.path, self.executed)?;
        }
        writeln!(f, "scheme: {}", self.scheme)?;
        if !self.expansion.is_empty() {
            let terms: Vec<String> = self
                .expansion
                .iter()
                .map(|(t, w)| format!("{t}:{w:.6}"))
                .collect();
            writeln!(f, "expansion: {}", terms.join(" "))?;
        }
        for h in &self.hits {
            writeln!(
                f,
                "{}\t{}\t{:.6}\t{}",
                h.rank, h.external_id, h.score, h.text
            )?;
        }
        Ok(())
    }
}

/// Expansion terms (empty on the tweet path) and the ranked hits.
type Ranked = (Vec<(String, f64)>, Vec<Hit>);

#[derive(Debug)]
pub struct Engine {
    config: EngineConfig,
    dispatch: DispatchConfig,
    stops: StopwordSet,
    tweets: Option<InvertedIndex>,
    documents: Option<InvertedIndex>,
    sentences: Option<InvertedIndex>,
}

impl Engine {
    /// Validates `config` and loads its stop list.
    pub fn new(config: EngineConfig) -> Result<Self> {
        let stops = config.stopwords()?;
        Self::with_stopwords(config, stops)
    }

    pub fn with_stopwords(config: EngineConfig, stops: StopwordSet) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            dispatch: config.dispatch()?,
            config,
            stops,
            tweets: None,
            documents: None,
            sentences: None,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn stopwords(&self) -> &StopwordSet {
        &self.stops
    }

    pub fn tweets(&self) -> Option<&InvertedIndex> {
        self.tweets.as_ref()
    }

    pub fn documents(&self) -> Option<&InvertedIndex> {
        self.documents.as_ref()
    }

    pub fn sentences(&self) -> Option<&InvertedIndex> {
        self.sentences.as_ref()
    }

    pub fn set_tweets(&mut self, index: InvertedIndex) -> Result<()> {
        expect_kind(&index, ItemKind::Tweet)?;
        self.tweets = Some(index);
        Ok(())
    }

    /// Installs a document index. Without a sentence repository one is
    /// rebuilt from the documents, with no topic labels.
    pub fn set_documents(
        &mut self,
        documents: InvertedIndex,
        sentences: Option<InvertedIndex>,
    ) -> Result<()> {
        expect_kind(&documents, ItemKind::Document)?;
        let sentences = match sentences {
            Some(s) => {
                expect_kind(&s, ItemKind::Sentence)?;
                s
            }
            None => build_sentence_repository(&documents, &[], &self.stops)?.0,
        };
        self.documents = Some(documents);
        self.sentences = Some(sentences);
        Ok(())
    }

    /// Loads a saved index, picking its role from the stored item kind.
    pub fn load_index(&mut self, path: &Path) -> Result<()> {
        let index = InvertedIndex::load(path)?;
        match index.items().first().map(|i| i.kind()) {
            Some(ItemKind::Tweet) => self.set_tweets(index),
            Some(ItemKind::Document) => {
                let side = sentences_path(path);
                let sentences = if side.exists() {
                    Some(InvertedIndex::load(&side)?)
                } else {
                    warn!(
                        "{} not found; rebuilding sentences without topics",
                        side.display()
                    );
                    None
                };
                self.set_documents(index, sentences)
            }
            Some(ItemKind::Sentence) => Err(Error::Corpus(format!(
                "{} is a sentence repository; load its document index instead",
                path.display()
            ))),
            None => Err(Error::Corpus(format!("{} holds no items", path.display()))),
        }
    }

    /// Whether any loaded tweet or document carries this id.
    pub fn contains(&self, external_id: &str) -> bool {
        [&self.tweets, &self.documents]
            .into_iter()
            .flatten()
            .any(|idx| idx.item_by_external(external_id).is_some())
    }

    pub fn scan(&self, query: &str) -> Result<QueryRecord> {
        query_scanner(query, &self.dispatch, &self.stops)
    }

    /// Runs `query` with the configured scheme.
    pub fn search(&self, query: &str, now: i64) -> Result<SearchOutcome> {
        self.search_with(query, now, self.config.scheme(), self.config.top_k)
    }

    pub fn search_with(
        &self,
        query: &str,
        now: i64,
        scheme: WeightingScheme,
        k: usize,
    ) -> Result<SearchOutcome> {
        let record = self.scan(query)?;
        let executed = match (record.path, &self.tweets, &self.documents) {
            (RetrievalPath::Tweet, Some(_), _) | (RetrievalPath::Slrs, _, Some(_)) => record.path,
            (RetrievalPath::Tweet, None, Some(_)) => {
                warn!("no tweet index loaded; running the long-query path");
                RetrievalPath::Slrs
            }
            (RetrievalPath::Slrs, Some(_), None) => {
                warn!("no document index loaded; running the tweet path");
                RetrievalPath::Tweet
            }
            (_, None, None) => return Err(Error::Corpus("no index loaded".into())),
        };
        let (expansion, hits) = match executed {
            RetrievalPath::Tweet => self.run_tweets(&record.stems, now, scheme, k)?,
            RetrievalPath::Slrs => self.run_slrs(&record.stems, scheme, k)?,
        };
        Ok(SearchOutcome {
            query: record,
            executed,
            scheme,
            expansion,
            hits,
        })
    }

    /// Runs a batch on scoped worker threads; output order follows input.
    pub fn search_batch(&self, queries: &[String], now: i64) -> Vec<Result<SearchOutcome>> {
        let workers = std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(queries.len().max(1));
        let chunk = queries.len().div_ceil(workers).max(1);
        std::thread::scope(|s| {
            let handles: Vec<_> = queries
                .chunks(chunk)
                .map(|part| {
                    s.spawn(move || part.iter().map(|q| self.search(q, now)).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    }

    fn run_tweets(
        &self,
        stems: &[String],
        now: i64,
        scheme: WeightingScheme,
        k: usize,
    ) -> Result<Ranked> {
        let index = self.tweets.as_ref().expect("checked by caller");
        let params = self.config.tweet_params::<f64>(scheme)?;
        let ranked = rank_tweet_stems(index, stems, k, &params, now)?;
        let hits = ranked
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let item = index.item(s.item_id)?;
                Ok(Hit {
                    rank: i + 1,
                    external_id: item.external_id.clone(),
                    score: s.total,
                    text: item.text.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok((Vec::new(), hits))
    }

    fn run_slrs(&self, stems: &[String], scheme: WeightingScheme, k: usize) -> Result<Ranked> {
        let docs = self.documents.as_ref().expect("checked by caller");
        let params = self.config.expansion_params::<f64>(scheme);
        let feedback = match (params.granularity, &self.sentences) {
            (FeedbackGranularity::Sentences, Some(s)) => s,
            _ => docs,
        };
        let result = slrs_search(docs, feedback, stems, k, &params)?;
        let hits = result
            .hits
            .into_iter()
            .enumerate()
            .map(|(i, (id, score))| {
                let item = docs.item(id)?;
                Ok(Hit {
                    rank: i + 1,
                    external_id: item.external_id.clone(),
                    score,
                    text: item.text.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok((result.expanded.expansion, hits))
    }
}

fn expect_kind(index: &InvertedIndex, kind: ItemKind) -> Result<()> {
    match index.items().iter().find(|i| i.kind() != kind) {
        Some(bad) => Err(Error::Corpus(format!(
            "expected only {kind} items, found {} `{}`",
            bad.kind(),
            bad.external_id
        ))),
        None => Ok(()),
    }
}
