//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works from raw stem lists with plain loops, without
//! touching the index, so it can check the indexed code independently.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use duoret::index::{IndexBuilder, InvertedIndex, ItemRecord};
use duoret::text::{stem, StopwordSet};
use duoret::weighting::{IdfVariant, NormVariant, WeightingScheme};
use rand::Rng;

/// Synthetic words that are neither stop words nor changed by stemming,
/// so raw token lists double as stem lists.
pub fn vocabulary(n: usize) -> Vec<String> {
    let stops = StopwordSet::default();
    let mut out = Vec::with_capacity(n);
    'outer: for c1 in "bdfghjklmnprstvz".chars() {
        for v in "aeiou".chars() {
            for c2 in "kp".chars() {
                let w = format!("{c1}{v}{c2}");
                assert_eq!(stem(&w), w, "synthetic word must be a fixed point");
                assert!(!stops.contains(&w));
                out.push(w);
                if out.len() == n {
                    break 'outer;
                }
            }
        }
    }
    assert_eq!(out.len(), n, "vocabulary generator too small");
    out
}

pub fn random_docs<R: Rng>(
    rng: &mut R,
    vocab: &[String],
    items: usize,
    max_len: usize,
) -> Vec<Vec<String>> {
    (0..items)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            (0..len)
                .map(|_| vocab[rng.gen_range(0..vocab.len())].clone())
                .collect()
        })
        .collect()
}

pub fn build_index(docs: &[Vec<String>]) -> InvertedIndex {
    let mut b = IndexBuilder::new();
    for (i, d) in docs.iter().enumerate() {
        b.add_item(
            ItemRecord::document(format!("d{i}"), "", d.join(" ")),
            &StopwordSet::empty(),
        )
        .expect("valid synthetic item");
    }
    b.freeze()
}

fn tf(doc: &[String], term: &str) -> f64 {
    doc.iter().filter(|t| *t == term).count() as f64
}

fn df(docs: &[Vec<String>], term: &str) -> f64 {
    docs.iter().filter(|d| d.iter().any(|t| t == term)).count() as f64
}

fn unique(doc: &[String]) -> f64 {
    doc.iter().collect::<BTreeSet<_>>().len() as f64
}

fn idf(docs: &[Vec<String>], term: &str, variant: IdfVariant) -> f64 {
    let d = df(docs, term);
    if d == 0.0 {
        return 0.0;
    }
    match variant {
        IdfVariant::Idf1 => (docs.len() as f64 / d).ln(),
        IdfVariant::Idf2 => d.ln(),
    }
}

/// tf × idf × normalization, straight from the raw lists, with the corpus
/// mean as pivot and item length as the pivoted-cosine statistic.
pub fn term_weight(
    docs: &[Vec<String>],
    item: usize,
    term: &str,
    scheme: WeightingScheme,
    slope: f64,
) -> f64 {
    let doc = &docs[item];
    let n = docs.len() as f64;
    let norm = match scheme.norm {
        NormVariant::Cosine => {
            let vocab: BTreeSet<&String> = doc.iter().collect();
            let sq: f64 = vocab
                .iter()
                .map(|t| {
                    let w = tf(doc, t) * idf(docs, t, scheme.idf);
                    w * w
                })
                .sum();
            if sq > 0.0 {
                1.0 / sq.sqrt()
            } else {
                1.0
            }
        }
        NormVariant::PivotedCosine => {
            let pivot = docs.iter().map(|d| d.len() as f64).sum::<f64>() / n;
            1.0 / ((1.0 - slope) * pivot + slope * doc.len() as f64)
        }
        NormVariant::PivotedUnique => {
            let pivot = docs.iter().map(|d| unique(d)).sum::<f64>() / n;
            1.0 / ((1.0 - slope) * pivot + slope * unique(doc))
        }
    };
    tf(doc, term) * idf(docs, term, scheme.idf) * norm
}

/// Binary query vector dotted with the item's weights.
pub fn similarity(
    docs: &[Vec<String>],
    item: usize,
    query: &[String],
    scheme: WeightingScheme,
    slope: f64,
) -> f64 {
    let distinct: BTreeSet<&String> = query.iter().collect();
    distinct
        .into_iter()
        .map(|t| term_weight(docs, item, t, scheme, slope))
        .sum()
}

/// Dirichlet-smoothed P(w|D).
pub fn dirichlet(docs: &[Vec<String>], item: usize, term: &str, mu: f64) -> f64 {
    let total: f64 = docs.iter().map(|d| d.len() as f64).sum();
    let cf: f64 = docs.iter().map(|d| tf(d, term)).sum();
    (tf(&docs[item], term) + mu * cf / total) / (docs[item].len() as f64 + mu)
}

fn corpus_vocabulary(docs: &[Vec<String>]) -> BTreeSet<String> {
    docs.iter().flatten().cloned().collect()
}

/// P(Q|D) as a plain product over query stems seen in the corpus.
fn query_likelihood(docs: &[Vec<String>], item: usize, query: &[String], mu: f64) -> f64 {
    let vocab = corpus_vocabulary(docs);
    query
        .iter()
        .filter(|q| vocab.contains(*q))
        .map(|q| dirichlet(docs, item, q, mu))
        .product()
}

/// Σ_D P(w|D) P(Q|D) P(D), normalized by the same sum over every w.
pub fn relevance_model(
    docs: &[Vec<String>],
    query: &[String],
    feedback: &[usize],
    mu: f64,
) -> BTreeMap<String, f64> {
    let prior = 1.0 / feedback.len() as f64;
    let vocab = corpus_vocabulary(docs);
    let mut raw = BTreeMap::new();
    for w in &vocab {
        let mut s = 0.0;
        for &d in feedback {
            s += dirichlet(docs, d, w, mu) * query_likelihood(docs, d, query, mu) * prior;
        }
        raw.insert(w.clone(), s);
    }
    let mut z = 0.0;
    for w in &vocab {
        for &d in feedback {
            z += dirichlet(docs, d, w, mu) * query_likelihood(docs, d, query, mu) * prior;
        }
    }
    raw.into_iter().map(|(w, s)| (w, s / z)).collect()
}

/// Σ_D P(D) Π_q P(q|D) P(E|D) over single-term concepts E from the feedback
/// items, normalized over those concepts.
pub fn lce(
    docs: &[Vec<String>],
    query: &[String],
    feedback: &[usize],
    mu: f64,
) -> BTreeMap<String, f64> {
    let prior = 1.0 / feedback.len() as f64;
    let vocab = corpus_vocabulary(docs);
    let concepts: BTreeSet<&String> = feedback.iter().flat_map(|&d| docs[d].iter()).collect();
    let joint = |e: &str| -> f64 {
        let mut s = 0.0;
        for &d in feedback {
            let mut p = prior;
            for q in query.iter().filter(|q| vocab.contains(*q)) {
                p *= dirichlet(docs, d, q, mu);
            }
            s += p * dirichlet(docs, d, e, mu);
        }
        s
    };
    let z: f64 = concepts.iter().map(|e| joint(e)).sum();
    concepts
        .into_iter()
        .map(|e| (e.clone(), joint(e) / z))
        .collect()
}

/// |a - b| relative to the larger magnitude; 0 when both are 0.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// A topical corpus in the on-disk line formats, plus a judged query
/// battery.
pub struct Synthetic {
    pub tweets: String,
    pub documents: String,
    pub queries: Vec<String>,
    pub judgments: String,
    pub now: i64,
}

fn pseudo_words<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    const SYL: [&str; 16] = [
        "ka", "ro", "mi", "tu", "le", "so", "ne", "pa", "di", "vo", "zu", "ha", "gi", "bo", "fe",
        "lu",
    ];
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        let k = rng.gen_range(2..=3);
        let w: String = (0..k).map(|_| SYL[rng.gen_range(0..SYL.len())]).collect();
        seen.insert(w);
    }
    seen.into_iter().collect()
}

pub fn synthetic<R: Rng>(
    rng: &mut R,
    n_tweets: usize,
    n_docs: usize,
    n_queries: usize,
) -> Synthetic {
    let topics = 10;
    let words = pseudo_words(rng, topics * 20);
    let topic_words: Vec<&[String]> = words.chunks(20).collect();
    let now = 1_700_000_000i64;
    let sentence = |rng: &mut R, t: usize, len: usize| -> String {
        (0..len)
            .map(|_| {
                if rng.gen_bool(0.8) {
                    topic_words[t][rng.gen_range(0..20)].as_str()
                } else {
                    words[rng.gen_range(0..words.len())].as_str()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut tweet_topic = Vec::new();
    let mut tweets = String::new();
    for i in 0..n_tweets {
        let t = rng.gen_range(0..topics);
        let len = rng.gen_range(3..=12);
        let text = sentence(rng, t, len);
        tweet_topic.push((format!("t{i}"), t, text.clone()));
        tweets.push_str(&format!(
            "{{\"id\":\"t{i}\",\"text\":\"{text}\",\"timestamp\":{},\"retweets\":{},\"quotes\":{},\"replies\":{}}}\n",
            now - rng.gen_range(0..86_400),
            rng.gen_range(0..500),
            rng.gen_range(0..50),
            rng.gen_range(0..80),
        ));
    }
    let mut doc_topic = Vec::new();
    let mut documents = String::new();
    for i in 0..n_docs {
        let t = rng.gen_range(0..topics);
        let n_sent = rng.gen_range(3..=8);
        let body: Vec<String> = (0..n_sent)
            .map(|_| {
                let len = rng.gen_range(5..=14);
                format!("{}.", sentence(rng, t, len))
            })
            .collect();
        let body = body.join(" ");
        doc_topic.push((format!("d{i}"), t, body.clone()));
        documents.push_str(&format!(
            "{{\"id\":\"d{i}\",\"title\":\"doc {i}\",\"body\":\"{body}\"}}\n"
        ));
    }

    let mut queries = Vec::new();
    let mut judgments = String::new();
    for qi in 0..n_queries {
        let t = rng.gen_range(0..topics);
        // alternate short and long queries
        let len = if qi % 2 == 0 {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(4..=6)
        };
        let mut q: Vec<&str> = Vec::new();
        while q.len() < len {
            let w = topic_words[t][rng.gen_range(0..20)].as_str();
            if !q.contains(&w) {
                q.push(w);
            }
        }
        let head = q[0];
        let pool = if len <= 3 { &tweet_topic } else { &doc_topic };
        let relevant: Vec<String> = pool
            .iter()
            .filter(|(_, topic, text)| *topic == t && text.split([' ', '.']).any(|w| w == head))
            .map(|(id, _, _)| format!("\"{id}\""))
            .collect();
        let query = q.join(" ");
        judgments.push_str(&format!(
            "{{\"query\":\"{query}\",\"relevant\":[{}]}}\n",
            relevant.join(",")
        ));
        queries.push(query);
    }
    Synthetic {
        tweets,
        documents,
        queries,
        judgments,
        now,
    }
}
