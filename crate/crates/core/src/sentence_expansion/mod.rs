//! Long-query retrieval.
//!
//! Documents are cut into topic-classified sentences that form a second
//! index. A long query is matched against those sentences, the best ones
//! act as pseudo-relevant feedback for a relevance model or latent concept
//! expansion, and the expanded query ranks the documents with tf-idf,
//! proximity and the weighted expansion terms.

mod expand;
mod language_model;
mod proximity;
mod repository;
mod topics;

pub use expand::{
    estimate_relevance_model, expand_query, score_documents, select_feedback, slrs_search,
    ExpandedQuery, ExpansionModel, ExpansionParams, FeedbackGranularity, SlrsResult,
};
pub use language_model::{
    combine_document_score, feedback_vocabulary, lce_distribution, lce_weight, relevance_model,
    DirichletModel, RelevanceDistribution,
};
pub use proximity::{proximity_feature, proximity_from_positions, ProximityParams};
pub use repository::{
    build_sentence_repository, classify_sentence, extract_sentences, RepositoryReport,
    SentenceEntry,
};
pub use topics::{classify_stems, parse_topics, TopicClass};
