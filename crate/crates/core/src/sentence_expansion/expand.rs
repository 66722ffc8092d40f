use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use log::warn;

use super::language_model::{
    feedback_vocabulary, lce_distribution, relevance_model, DirichletModel, RelevanceDistribution,
};
use super::proximity::{proximity_feature, ProximityParams};
use crate::error::{Error, Result};
use crate::index::{InvertedIndex, ItemId};
use crate::scalar::Real;
use crate::weighting::{distinct, Scorer, WeightingParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionModel {
    /// relevance model
    Rm,
    /// latent concept expansion
    #[default]
    Lce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedbackGranularity {
    #[default]
    Sentences,
    Documents,
}

impl fmt::Display for ExpansionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpansionModel::Rm => "rm",
            ExpansionModel::Lce => "lce",
        })
    }
}

impl FromStr for ExpansionModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rm" => Ok(Self::Rm),
            "lce" => Ok(Self::Lce),
            _ => Err(Error::InvalidParameter(format!(
                "unknown expansion model `{s}`"
            ))),
        }
    }
}

impl fmt::Display for FeedbackGranularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedbackGranularity::Sentences => "sentences",
            FeedbackGranularity::Documents => "documents",
        })
    }
}

impl FromStr for FeedbackGranularity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sentences" | "sentence" => Ok(Self::Sentences),
            "documents" | "document" => Ok(Self::Documents),
            _ => Err(Error::InvalidParameter(format!(
                "unknown feedback granularity `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionParams<T> {
    pub model: ExpansionModel,
    pub mu: T,
    pub n_feedback: usize,
    pub k_expansion: usize,
    /// weight of the original query at scoring time
    pub lambda: T,
    pub proximity: ProximityParams<T>,
    pub granularity: FeedbackGranularity,
    pub weighting: WeightingParams<T>,
}

impl<T: Real> Default for ExpansionParams<T> {
    fn default() -> Self {
        Self {
            model: ExpansionModel::default(),
            mu: T::lit(10.0),
            n_feedback: 10,
            k_expansion: 10,
            lambda: T::lit(0.5),
            proximity: ProximityParams::default(),
            granularity: FeedbackGranularity::default(),
            weighting: WeightingParams::default(),
        }
    }
}

impl<T: Real> ExpansionParams<T> {
    fn validate(&self) -> Result<()> {
        if !(self.lambda >= T::zero() && self.lambda <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        if self.n_feedback == 0 {
            return Err(Error::InvalidParameter(
                "n_feedback must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Original stems plus weighted expansion stems.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedQuery<T> {
    pub original: Vec<String>,
    pub expansion: Vec<(String, T)>,
    pub lambda: T,
    pub feedback_set: Vec<ItemId>,
}

impl<T: Real> ExpandedQuery<T> {
    pub fn unexpanded(original: Vec<String>, lambda: T) -> Self {
        Self {
            original,
            expansion: Vec::new(),
            lambda,
            feedback_set: Vec::new(),
        }
    }
}

fn by_score_then_id<T: Real>(a: &(ItemId, T), b: &(ItemId, T)) -> Ordering {
    b.1.partial_cmp(&a.1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.0.cmp(&b.0))
}

/// Ranks feedback candidates by similarity + proximity. Items containing
/// every query stem are preferred; when none exist, items containing any
/// query stem are used.
pub fn select_feedback<T: Real, S: AsRef<str>>(
    scorer: &Scorer<'_, T>,
    query: &[S],
    n: usize,
    proximity: &ProximityParams<T>,
) -> Result<Vec<ItemId>> {
    let index = scorer.index();
    let unique = distinct(query);
    let mut pool = index.conjunctive_candidates(&unique);
    if pool.is_empty() {
        pool = index.candidates(&unique);
    }
    let mut ranked = pool
        .into_iter()
        .map(|id| {
            let score =
                scorer.similarity(query, id)? + proximity_feature(index, query, id, proximity)?;
            Ok((id, score))
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(by_score_then_id);
    Ok(ranked.into_iter().take(n).map(|(id, _)| id).collect())
}

/// Pseudo-relevance feedback with the top `n_feedback` items by
/// similarity alone as the feedback set.
pub fn estimate_relevance_model<T: Real, S: AsRef<str>>(
    index: &InvertedIndex,
    query: &[S],
    n_feedback: usize,
    mu: T,
    weighting: &WeightingParams<T>,
) -> Result<RelevanceDistribution<T>> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let scorer = Scorer::new(index, weighting)?;
    let mut ranked = index
        .candidates(query)
        .into_iter()
        .map(|id| Ok((id, scorer.similarity(query, id)?)))
        .collect::<Result<Vec<_>>>()?;
    if ranked.is_empty() {
        return Err(Error::EmptyFeedback);
    }
    ranked.sort_by(by_score_then_id);
    let feedback: Vec<ItemId> = ranked
        .into_iter()
        .take(n_feedback)
        .map(|(id, _)| id)
        .collect();
    relevance_model(&DirichletModel::new(index, mu)?, query, &feedback)
}

/// Expands preprocessed `query` stems from the feedback index.
///
/// An empty feedback set degrades to the unexpanded query.
pub fn expand_query<T: Real>(
    feedback_index: &InvertedIndex,
    query: &[String],
    params: &ExpansionParams<T>,
) -> Result<ExpandedQuery<T>> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    params.validate()?;
    let unexpanded = ExpandedQuery::unexpanded(query.to_vec(), params.lambda);
    if params.k_expansion == 0 {
        return Ok(unexpanded);
    }
    let scorer = Scorer::new(feedback_index, &params.weighting)?;
    let feedback = select_feedback(&scorer, query, params.n_feedback, &params.proximity)?;
    if feedback.is_empty() {
        warn!("no feedback item matches {query:?}; query left unexpanded");
        return Ok(unexpanded);
    }
    let model = DirichletModel::new(feedback_index, params.mu)?;
    let dist = match params.model {
        ExpansionModel::Rm => relevance_model(&model, query, &feedback)?,
        ExpansionModel::Lce => lce_distribution(&model, query, &feedback)?,
    };
    let candidates = feedback_vocabulary(feedback_index, &feedback)?;
    let exclude: BTreeSet<String> = query.iter().cloned().collect();
    Ok(ExpandedQuery {
        original: query.to_vec(),
        expansion: dist.top_terms(params.k_expansion, &candidates, &exclude),
        lambda: params.lambda,
        feedback_set: feedback,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlrsResult<T> {
    pub expanded: ExpandedQuery<T>,
    /// (document id, score), best first
    pub hits: Vec<(ItemId, T)>,
}

/// Scores documents for an already expanded query.
///
/// `λ·(similarity + proximity of the original stems) + (1-λ)·Σ weight·term_weight`
/// over the expansion stems.
pub fn score_documents<T: Real>(
    docs: &InvertedIndex,
    expanded: &ExpandedQuery<T>,
    k_results: usize,
    weighting: &WeightingParams<T>,
    proximity: &ProximityParams<T>,
) -> Result<Vec<(ItemId, T)>> {
    let scorer = Scorer::new(docs, weighting)?;
    let lambda = expanded.lambda;
    let use_expansion = lambda < T::one() && !expanded.expansion.is_empty();
    let mut pool = docs.candidates(&expanded.original);
    if use_expansion {
        let terms: Vec<&str> = expanded.expansion.iter().map(|(t, _)| t.as_str()).collect();
        pool.extend(docs.candidates(&terms));
        pool.sort_unstable();
        pool.dedup();
    }
    let mut hits = pool
        .into_iter()
        .map(|id| {
            let base = scorer.similarity(&expanded.original, id)?
                + proximity_feature(docs, &expanded.original, id, proximity)?;
            let mut extra = T::zero();
            if use_expansion {
                for (term, weight) in &expanded.expansion {
                    extra = extra + *weight * scorer.term_weight(term, id)?;
                }
            }
            Ok((id, lambda * base + (T::one() - lambda) * extra))
        })
        .collect::<Result<Vec<_>>>()?;
    hits.sort_by(by_score_then_id);
    hits.truncate(k_results);
    Ok(hits)
}

/// Long-query retrieval: expand from the feedback index, then rank documents.
pub fn slrs_search<T: Real>(
    docs: &InvertedIndex,
    feedback_index: &InvertedIndex,
    query: &[String],
    k_results: usize,
    params: &ExpansionParams<T>,
) -> Result<SlrsResult<T>> {
    let expanded = expand_query(feedback_index, query, params)?;
    let hits = score_documents(
        docs,
        &expanded,
        k_results,
        &params.weighting,
        &params.proximity,
    )?;
    Ok(SlrsResult { expanded, hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{IndexBuilder, ItemRecord};
    use crate::sentence_expansion::build_sentence_repository;
    use crate::text::{preprocess_stems, StopwordSet};

    fn docs(bodies: &[&str]) -> InvertedIndex {
        let mut b = IndexBuilder::new();
        for (i, body) in bodies.iter().enumerate() {
            b.add_item(
                ItemRecord::document(format!("d{i}"), "", *body),
                &StopwordSet::default(),
            )
            .unwrap();
        }
        b.freeze()
    }

    fn stems(q: &str) -> Vec<String> {
        preprocess_stems(q, &StopwordSet::default())
    }

    #[test]
    fn zero_k_returns_the_query_unchanged() {
        let idx = docs(&["alpha beta gamma. delta alpha."]);
        let p = ExpansionParams {
            k_expansion: 0,
            ..ExpansionParams::<f64>::default()
        };
        let e = expand_query(&idx, &stems("alpha beta"), &p).unwrap();
        assert!(e.expansion.is_empty());
        assert_eq!(e.original, ["alpha", "beta"]);
    }

    #[test]
    fn unseen_query_degrades_gracefully() {
        let idx = docs(&["alpha beta gamma"]);
        let e = expand_query(
            &idx,
            &stems("zebra yak"),
            &ExpansionParams::<f64>::default(),
        )
        .unwrap();
        assert!(e.expansion.is_empty());
        assert!(e.feedback_set.is_empty());
    }

    #[test]
    fn empty_query_is_an_error() {
        let idx = docs(&["alpha"]);
        assert!(matches!(
            expand_query(&idx, &[], &ExpansionParams::<f64>::default()),
            Err(Error::EmptyQuery)
        ));
    }

    #[test]
    fn strict_subset_match_selects_feedback() {
        let body = "Solar panel arrays feed inverters. Solar farms cover deserts. \
                    Panel makers cut prices.";
        let doc = docs(&[body]);
        let (repo, _) = build_sentence_repository(&doc, &[], &StopwordSet::default()).unwrap();
        for model in [ExpansionModel::Rm, ExpansionModel::Lce] {
            let p = ExpansionParams {
                model,
                k_expansion: 2,
                ..ExpansionParams::<f64>::default()
            };
            let e = expand_query(&repo, &stems("solar panel"), &p).unwrap();
            assert_eq!(e.feedback_set, [0], "{model}");
            let mut terms: Vec<&str> = e.expansion.iter().map(|(t, _)| t.as_str()).collect();
            terms.sort_unstable();
            // the sentence's remaining stems, both with tf 1
            assert_eq!(terms, ["arrai", "feed"], "{model}");
            assert!(e
                .expansion
                .iter()
                .all(|(t, _)| t != "solar" && t != "panel"));
        }
    }

    #[test]
    fn partial_match_fallback() {
        let idx = docs(&["red apples. green pears. blue sky."]);
        let (repo, _) = build_sentence_repository(&idx, &[], &StopwordSet::default()).unwrap();
        let e = expand_query(
            &repo,
            &stems("apples pears"),
            &ExpansionParams::<f64>::default(),
        )
        .unwrap();
        let mut fb = e.feedback_set.clone();
        fb.sort_unstable();
        assert_eq!(fb, [0, 1]);
        assert!(e.expansion.len() <= 10);
    }

    #[test]
    fn lambda_one_and_k_zero_agree_with_unexpanded_ranking() {
        let idx = docs(&[
            "wind turbine blades spin fast",
            "turbine maintenance crews",
            "wind farms offshore and wind power",
            "unrelated cooking recipe",
        ]);
        let (repo, _) = build_sentence_repository(&idx, &[], &StopwordSet::default()).unwrap();
        let q = stems("wind turbine power output");
        let base = ExpansionParams::<f64>::default();
        let one = ExpansionParams {
            lambda: 1.0,
            ..base.clone()
        };
        let zero_k = ExpansionParams {
            k_expansion: 0,
            ..base.clone()
        };
        let order = |r: &SlrsResult<f64>| r.hits.iter().map(|h| h.0).collect::<Vec<_>>();
        let a = slrs_search(&idx, &repo, &q, 10, &one).unwrap();
        let b = slrs_search(&idx, &repo, &q, 10, &zero_k).unwrap();
        let plain = score_documents(
            &idx,
            &ExpandedQuery::unexpanded(q.clone(), 1.0),
            10,
            &base.weighting,
            &base.proximity,
        )
        .unwrap();
        assert_eq!(order(&a), plain.iter().map(|h| h.0).collect::<Vec<_>>());
        assert_eq!(order(&a), order(&b));
        assert!(!order(&a).contains(&3));
    }

    #[test]
    fn invalid_lambda_is_rejected() {
        let idx = docs(&["alpha"]);
        let p = ExpansionParams {
            lambda: 1.5,
            ..ExpansionParams::<f64>::default()
        };
        assert!(expand_query(&idx, &stems("alpha"), &p).is_err());
    }

    #[test]
    fn estimate_relevance_model_uses_similarity_ranking() {
        let idx = docs(&["cat cat dog", "cat bird", "fish"]);
        let rm =
            estimate_relevance_model(&idx, &stems("cat"), 1, 10.0f64, &WeightingParams::default())
                .unwrap();
        assert_eq!(rm.feedback_set.len(), 1);
        assert!((rm.total() - 1.0).abs() < 1e-12);
        assert!(matches!(
            estimate_relevance_model(
                &idx,
                &stems("zebra"),
                2,
                10.0f64,
                &WeightingParams::default()
            ),
            Err(Error::EmptyFeedback)
        ));
    }
}
