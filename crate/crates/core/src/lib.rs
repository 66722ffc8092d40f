//! Dual-path retrieval over microblog posts and long documents.
//!
//! Short queries rank tweets by term similarity, recency and popularity.
//! Long queries are expanded from a topic-labelled sentence repository and
//! then rank documents. Both paths share one positional inverted index and
//! six tf-idf weighting schemes.
//!
//! The scoring code is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the engine and CLI use.

pub mod config;
pub mod dispatch;
pub mod engine;
pub mod error;
pub mod eval;
pub mod index;
pub mod ingest;
pub mod scalar;
pub mod sentence_expansion;
pub mod text;
pub mod tweet_search;
pub mod weighting;

pub use config::EngineConfig;
pub use dispatch::{query_scanner, DispatchConfig, QueryRecord, RetrievalPath, ThresholdRule};
pub use engine::{Engine, Hit, SearchOutcome};
pub use error::{Error, Result};
pub use index::{IndexBuilder, InvertedIndex, ItemId, ItemKind, ItemMeta, ItemRecord, TermId};
pub use ingest::{ingest, ingest_str, BuildReport, CorpusKind, Ingested};
pub use scalar::Real;
pub use text::StopwordSet;
pub use weighting::{IdfVariant, NormVariant, PivotStat, WeightingScheme};

pub type Scorer64<'a> = weighting::Scorer<'a, f64>;
pub type WeightingParams64 = weighting::WeightingParams<f64>;
pub type PivotParams64 = weighting::PivotParams<f64>;
pub type TweetParams64 = tweet_search::TweetParams<f64>;
pub type TweetScore64 = tweet_search::TweetScore<f64>;
pub type RankWeights64 = tweet_search::RankWeights<f64>;
pub type ExpansionParams64 = sentence_expansion::ExpansionParams<f64>;
pub type ExpandedQuery64 = sentence_expansion::ExpandedQuery<f64>;
pub type DirichletModel64<'a> = sentence_expansion::DirichletModel<'a, f64>;
pub type RelevanceDistribution64 = sentence_expansion::RelevanceDistribution<f64>;
pub type ProximityParams64 = sentence_expansion::ProximityParams<f64>;
pub type SlrsResult64 = sentence_expansion::SlrsResult<f64>;
