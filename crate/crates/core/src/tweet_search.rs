//! Short-query ranking over tweet items.
//!
//! The score of a candidate is a convex mix of three bounded signals:
//! min-max normalized term-weight similarity, half-life recency decay and
//! log-damped engagement normalized over the candidate set.

use std::cmp::Ordering;

use log::warn;

use crate::error::{Error, Result};
use crate::index::{InvertedIndex, ItemId, ItemMeta};
use crate::scalar::Real;
use crate::text::{preprocess_stems, StopwordSet};
use crate::weighting::{Scorer, WeightingParams};

/// Mixing coefficients, renormalized to sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankWeights<T> {
    term: T,
    time: T,
    pop: T,
}

impl<T: Real> RankWeights<T> {
    pub fn new(term: T, time: T, pop: T) -> Result<Self> {
        let all = [term, time, pop];
        if all.iter().any(|w| !(w.is_finite() && *w >= T::zero())) {
            return Err(Error::InvalidParameter(
                "rank weights must be finite and non-negative".into(),
            ));
        }
        let sum = term + time + pop;
        if sum <= T::zero() {
            return Err(Error::InvalidParameter(
                "rank weights must not all be zero".into(),
            ));
        }
        Ok(Self {
            term: term / sum,
            time: time / sum,
            pop: pop / sum,
        })
    }

    pub fn term(&self) -> T {
        self.term
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn pop(&self) -> T {
        self.pop
    }
}

impl<T: Real> Default for RankWeights<T> {
    fn default() -> Self {
        Self::new(T::lit(0.6), T::lit(0.25), T::lit(0.15)).expect("valid defaults")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recency<T> {
    pub weight: T,
    /// the timestamp lies in the future relative to `now`
    pub clock_skew: bool,
}

/// `2^(-(now - timestamp) / half_life)`, clamped to 1 for future timestamps.
pub fn recency_weight<T: Real>(timestamp: i64, now: i64, half_life: T) -> Recency<T> {
    if timestamp > now {
        return Recency {
            weight: T::one(),
            clock_skew: true,
        };
    }
    let age = T::lit((now - timestamp) as f64);
    Recency {
        weight: T::lit(2.0).powf(-(age / half_life)),
        clock_skew: false,
    }
}

pub fn engagement(retweets: u64, quotes: u64, replies: u64) -> u64 {
    retweets.saturating_add(quotes).saturating_add(replies)
}

/// `ln(1 + engagement) / ln(1 + candidate_max)`; 0 when `candidate_max` is 0.
pub fn popularity_weight<T: Real>(
    retweets: u64,
    quotes: u64,
    replies: u64,
    candidate_max: u64,
) -> T {
    engagement_share(engagement(retweets, quotes, replies), candidate_max)
}

fn engagement_share<T: Real>(raw: u64, candidate_max: u64) -> T {
    if candidate_max == 0 {
        return T::zero();
    }
    (T::count(raw).ln_1p() / T::count(candidate_max).ln_1p()).min(T::one())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TweetParams<T> {
    pub weighting: WeightingParams<T>,
    pub weights: RankWeights<T>,
    /// seconds
    pub half_life: T,
}

impl<T: Real> Default for TweetParams<T> {
    fn default() -> Self {
        Self {
            weighting: WeightingParams::default(),
            weights: RankWeights::default(),
            half_life: T::lit(3600.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TweetScore<T> {
    pub item_id: ItemId,
    /// raw similarity
    pub term_component: T,
    /// similarity after min-max normalization over the candidates
    pub term_normalized: T,
    pub time_component: T,
    pub pop_component: T,
    pub total: T,
    pub timestamp: i64,
    pub clock_skew: bool,
}

/// Preprocesses `query` and ranks matching tweets.
pub fn rank_tweets<T: Real>(
    index: &InvertedIndex,
    query: &str,
    stops: &StopwordSet,
    k: usize,
    params: &TweetParams<T>,
    now: i64,
) -> Result<Vec<TweetScore<T>>> {
    let stems = preprocess_stems(query, stops);
    rank_tweet_stems(index, &stems, k, params, now)
}

/// Ranks tweets for an already preprocessed query.
pub fn rank_tweet_stems<T: Real, S: AsRef<str>>(
    index: &InvertedIndex,
    stems: &[S],
    k: usize,
    params: &TweetParams<T>,
    now: i64,
) -> Result<Vec<TweetScore<T>>> {
    if stems.is_empty() {
        return Err(Error::EmptyQuery);
    }
    if params.half_life.is_nan() || params.half_life <= T::zero() {
        return Err(Error::InvalidParameter("half-life must be positive".into()));
    }
    let scorer = Scorer::new(index, &params.weighting)?;

    struct Candidate<T> {
        id: ItemId,
        sim: T,
        timestamp: i64,
        engagement: u64,
    }
    let mut candidates = Vec::new();
    for id in index.candidates(stems) {
        let item = index.item(id)?;
        let ItemMeta::Tweet {
            timestamp,
            retweets,
            quotes,
            replies,
        } = item.meta
        else {
            continue;
        };
        candidates.push(Candidate {
            id,
            sim: scorer.similarity(stems, id)?,
            timestamp,
            engagement: engagement(retweets, quotes, replies),
        });
    }
    if candidates.is_empty() {
        return Ok(Vec::new());
    }

    let min = candidates.iter().map(|c| c.sim).fold(T::infinity(), T::min);
    let max = candidates
        .iter()
        .map(|c| c.sim)
        .fold(T::neg_infinity(), T::max);
    let range = max - min;
    let max_engagement = candidates.iter().map(|c| c.engagement).max().unwrap_or(0);
    let weights = params.weights;

    let mut scored: Vec<TweetScore<T>> = candidates
        .into_iter()
        .map(|c| {
            let term_normalized = if range > T::zero() {
                (c.sim - min) / range
            } else if max > T::zero() {
                T::one()
            } else {
                T::zero()
            };
            let recency = recency_weight(c.timestamp, now, params.half_life);
            if recency.clock_skew {
                warn!(
                    "tweet {} has timestamp {} after now={now}; recency clamped to 1",
                    index.items()[c.id as usize].external_id,
                    c.timestamp
                );
            }
            let pop = engagement_share(c.engagement, max_engagement);
            TweetScore {
                item_id: c.id,
                term_component: c.sim,
                term_normalized,
                time_component: recency.weight,
                pop_component: pop,
                total: weights.term * term_normalized
                    + weights.time * recency.weight
                    + weights.pop * pop,
                timestamp: c.timestamp,
                clock_skew: recency.clock_skew,
            }
        })
        .collect();
    scored.sort_by(rank_order);
    scored.truncate(k);
    Ok(scored)
}

/// Higher total first, then newer, then lower id.
pub fn rank_order<T: Real>(a: &TweetScore<T>, b: &TweetScore<T>) -> Ordering {
    b.total
        .partial_cmp(&a.total)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.timestamp.cmp(&a.timestamp))
        .then_with(|| a.item_id.cmp(&b.item_id))
}
