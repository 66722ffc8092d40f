//! Smoothed item language models and the two feedback expansion models.
//!
//! Both models weight feedback items by their query posterior
//! `P(Q|D)P(D) / Σ_D' P(Q|D')P(D')` with a uniform prior. The relevance
//! model then mixes `P(w|D)` over the whole vocabulary; latent concept
//! expansion mixes `P(E|D)` over the feedback vocabulary and renormalizes.
//! Because each Dirichlet model sums to one over the vocabulary, the
//! posterior-first form equals the doubly-normalized ratio term for term.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::index::{InvertedIndex, ItemId, TermId};
use crate::scalar::Real;

/// Dirichlet-smoothed unigram model of every item in one index.
#[derive(Debug, Clone)]
pub struct DirichletModel<'a, T> {
    index: &'a InvertedIndex,
    mu: T,
    total_tokens: T,
}

impl<'a, T: Real> DirichletModel<'a, T> {
    pub fn new(index: &'a InvertedIndex, mu: T) -> Result<Self> {
        if !(mu > T::zero() && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive and finite, got {mu}"
            )));
        }
        Ok(Self {
            index,
            mu,
            total_tokens: T::count(index.stats().total_tokens),
        })
    }

    pub fn index(&self) -> &'a InvertedIndex {
        self.index
    }

    /// P(w|C), the maximum-likelihood collection model.
    pub fn collection_prob(&self, tid: TermId) -> T {
        if self.total_tokens <= T::zero() {
            return T::zero();
        }
        T::count(self.index.collection_frequency(tid)) / self.total_tokens
    }

    /// P(w|D) = (tf + μ P(w|C)) / (|D| + μ).
    pub fn prob(&self, tid: TermId, item: ItemId) -> Result<T> {
        let entry = self.index.item(item)?;
        let tf = self
            .index
            .positions(tid, item)
            .map_or(0, |p| p.len() as u64);
        Ok((T::count(tf) + self.mu * self.collection_prob(tid))
            / (T::count(u64::from(entry.length)) + self.mu))
    }

    /// P(w|D) by term string; 0 for terms outside the vocabulary.
    pub fn prob_term(&self, term: &str, item: ItemId) -> Result<T> {
        match self.index.term_id(term) {
            Some(tid) => self.prob(tid, item),
            None => {
                self.index.item(item)?;
                Ok(T::zero())
            }
        }
    }

    /// ln P(Q|D) over the query stems present in the vocabulary.
    pub fn log_query_likelihood<S: AsRef<str>>(&self, query: &[S], item: ItemId) -> Result<T> {
        let mut total = T::zero();
        for q in query {
            if let Some(tid) = self.index.term_id(q.as_ref()) {
                total = total + self.prob(tid, item)?.ln();
            }
        }
        Ok(total)
    }

    /// Normalized P(D|Q) over `feedback` with a uniform prior.
    pub fn posterior<S: AsRef<str>>(&self, query: &[S], feedback: &[ItemId]) -> Result<Vec<T>> {
        if feedback.is_empty() {
            return Err(Error::EmptyFeedback);
        }
        let logs = feedback
            .iter()
            .map(|&d| self.log_query_likelihood(query, d))
            .collect::<Result<Vec<T>>>()?;
        let max = logs.iter().copied().fold(T::neg_infinity(), T::max);
        let weights: Vec<T> = logs.iter().map(|&l| (l - max).exp()).collect();
        let z: T = weights.iter().copied().sum();
        Ok(weights.into_iter().map(|w| w / z).collect())
    }
}

/// A term distribution estimated from feedback items.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceDistribution<T> {
    pub probs: BTreeMap<String, T>,
    pub feedback_set: Vec<ItemId>,
}

impl<T: Real> RelevanceDistribution<T> {
    pub fn prob(&self, term: &str) -> T {
        self.probs.get(term).copied().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.probs.values().copied().sum()
    }

    /// Highest-probability terms from `candidates` that are not in
    /// `exclude`, ties broken lexicographically.
    pub fn top_terms(
        &self,
        k: usize,
        candidates: &BTreeSet<String>,
        exclude: &BTreeSet<String>,
    ) -> Vec<(String, T)> {
        let mut ranked: Vec<(String, T)> = candidates
            .iter()
            .filter(|t| !exclude.contains(*t))
            .filter_map(|t| self.probs.get(t).map(|&p| (t.clone(), p)))
            .collect();
        ranked.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        ranked.truncate(k);
        ranked
    }
}

/// Terms occurring in at least one feedback item.
pub fn feedback_vocabulary(index: &InvertedIndex, feedback: &[ItemId]) -> Result<BTreeSet<String>> {
    let mut vocab = BTreeSet::new();
    for &d in feedback {
        for &(tid, _) in index.item_terms(d)? {
            vocab.insert(index.term(tid).to_string());
        }
    }
    Ok(vocab)
}

/// Relevance model P(w|Q) over the full vocabulary of the model's index.
pub fn relevance_model<T: Real, S: AsRef<str>>(
    model: &DirichletModel<'_, T>,
    query: &[S],
    feedback: &[ItemId],
) -> Result<RelevanceDistribution<T>> {
    let posterior = model.posterior(query, feedback)?;
    let index = model.index();
    let mut probs = BTreeMap::new();
    let mut per_doc = vec![T::zero(); feedback.len()];
    for (tid, term) in index.terms().iter().enumerate() {
        for (slot, &d) in per_doc.iter_mut().zip(feedback) {
            *slot = model.prob(tid as TermId, d)?;
        }
        probs.insert(term.clone(), mixture(&per_doc, &posterior));
    }
    Ok(RelevanceDistribution {
        probs,
        feedback_set: feedback.to_vec(),
    })
}

/// Latent concept weights P(E|Q) over single-term concepts drawn from the
/// feedback vocabulary.
pub fn lce_distribution<T: Real, S: AsRef<str>>(
    model: &DirichletModel<'_, T>,
    query: &[S],
    feedback: &[ItemId],
) -> Result<RelevanceDistribution<T>> {
    let posterior = model.posterior(query, feedback)?;
    let index = model.index();
    let candidates = feedback_vocabulary(index, feedback)?;
    let mut raw = BTreeMap::new();
    let mut per_doc = vec![T::zero(); feedback.len()];
    for term in candidates {
        let tid = index.term_id(&term).expect("feedback term is indexed");
        for (slot, &d) in per_doc.iter_mut().zip(feedback) {
            *slot = model.prob(tid, d)?;
        }
        raw.insert(term, mixture(&per_doc, &posterior));
    }
    let z: T = raw.values().copied().sum();
    let probs = raw.into_iter().map(|(t, p)| (t, p / z)).collect();
    Ok(RelevanceDistribution {
        probs,
        feedback_set: feedback.to_vec(),
    })
}

/// P(E|Q) of a single concept; 0 for terms outside the feedback vocabulary.
pub fn lce_weight<T: Real, S: AsRef<str>>(
    model: &DirichletModel<'_, T>,
    expansion_term: &str,
    query: &[S],
    feedback: &[ItemId],
) -> Result<T> {
    Ok(lce_distribution(model, query, feedback)?.prob(expansion_term))
}

fn mixture<T: Real>(per_doc: &[T], posterior: &[T]) -> T {
    per_doc
        .iter()
        .zip(posterior)
        .fold(T::zero(), |acc, (&p, &w)| acc + p * w)
}

/// Σ_d p(V|d) p(D=d|Q), rejecting posteriors that are not distributions.
pub fn combine_document_score<T: Real>(per_doc: &[T], posterior: &[T]) -> Result<T> {
    if per_doc.len() != posterior.len() {
        return Err(Error::InvalidParameter(format!(
            "{} document probabilities but {} posterior weights",
            per_doc.len(),
            posterior.len()
        )));
    }
    let sum: T = posterior.iter().copied().sum();
    let negative = posterior.iter().any(|&w| w.is_nan() || w < T::zero());
    if negative || (sum - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::UnnormalizedPosterior(sum.to_f64_lossy()));
    }
    Ok(mixture(per_doc, posterior))
}
