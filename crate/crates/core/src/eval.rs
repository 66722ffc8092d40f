//! Precision at k and reciprocal rank over judged queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use log::warn;
use serde::Deserialize;

use crate::dispatch::RetrievalPath;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::weighting::WeightingScheme;

/// Cutoffs reported for precision.
pub const CUTOFFS: [usize; 3] = [1, 5, 10];

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Judgment {
    pub query: String,
    pub relevant: BTreeSet<String>,
}

/// One `{"query": .., "relevant": [..]}` record per line. A query judged
/// twice is an error.
pub fn parse_judgments(body: &str) -> Result<Vec<Judgment>> {
    let mut out: Vec<Judgment> = Vec::new();
    for (n, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let j: Judgment = serde_json::from_str(line)
            .map_err(|e| Error::Corpus(format!("judgments line {}: {e}", n + 1)))?;
        if out.iter().any(|o| o.query == j.query) {
            return Err(Error::Corpus(format!(
                "judgments line {}: query `{}` judged twice",
                n + 1,
                j.query
            )));
        }
        out.push(j);
    }
    Ok(out)
}

#[derive(Deserialize)]
struct QueryLine {
    query: String,
}

/// Queries file: each non-blank line is either `{"query": ".."}` or the
/// plain query text.
pub fn parse_queries(body: &str) -> Result<Vec<String>> {
    body.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            if line.trim_start().starts_with('{') {
                serde_json::from_str::<QueryLine>(line)
                    .map(|q| q.query)
                    .map_err(|e| Error::Corpus(format!("queries line {}: {e}", n + 1)))
            } else {
                Ok(line.trim().to_string())
            }
        })
        .collect()
}

/// Relevant hits in the top `k`, divided by `k`.
pub fn precision_at<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let hits = ranked
        .iter()
        .take(k)
        .filter(|id| relevant.contains(id.as_ref()))
        .count();
    hits as f64 / k as f64
}

/// 1 / rank of the first relevant hit, 0 when none was retrieved.
pub fn reciprocal_rank<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>) -> f64 {
    ranked
        .iter()
        .position(|id| relevant.contains(id.as_ref()))
        .map_or(0.0, |i| 1.0 / (i + 1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryMetrics {
    pub query: String,
    pub path: RetrievalPath,
    pub executed: RetrievalPath,
    /// precision at each of `CUTOFFS`
    pub precision: [f64; 3],
    pub reciprocal_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeReport {
    pub scheme: WeightingScheme,
    pub queries: Vec<QueryMetrics>,
    pub mean_precision: [f64; 3],
    pub mrr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub now: i64,
    pub schemes: Vec<SchemeReport>,
    /// queries left out: unjudged or empty after preprocessing
    pub skipped: Vec<String>,
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "now: {}", self.now)?;
        for s in &self.schemes {
            writeln!(f, "scheme {}", s.scheme)?;
            for q in &s.queries {
                writeln!(
                    f,
                    "  {}\t{}\tP@1={:.4}\tP@5={:.4}\tP@10={:.4}\tRR={:.4}\t{}",
                    q.path,
                    q.executed,
                    q.precision[0],
                    q.precision[1],
                    q.precision[2],
                    q.reciprocal_rank,
                    q.query
                )?;
            }
            writeln!(
                f,
                "  mean\tP@1={:.4}\tP@5={:.4}\tP@10={:.4}\tMRR={:.4}",
                s.mean_precision[0], s.mean_precision[1], s.mean_precision[2], s.mrr
            )?;
        }
        for q in &self.skipped {
            writeln!(f, "skipped: {q}")?;
        }
        Ok(())
    }
}

/// Scores every judged query under all six weighting schemes.
///
/// Judgments naming an item no loaded index holds are an error.
pub fn evaluate(
    engine: &Engine,
    queries: &[String],
    judgments: &[Judgment],
    now: i64,
) -> Result<EvalReport> {
    for j in judgments {
        if let Some(id) = j.relevant.iter().find(|id| !engine.contains(id)) {
            return Err(Error::UnknownExternalId(id.clone()));
        }
    }
    let judged: BTreeMap<&str, &BTreeSet<String>> = judgments
        .iter()
        .map(|j| (j.query.as_str(), &j.relevant))
        .collect();

    let depth = *CUTOFFS.last().expect("non-empty");
    let mut skipped = Vec::new();
    let mut runnable = Vec::new();
    for q in queries {
        match judged.get(q.as_str()) {
            None => {
                warn!("query `{q}` has no judgment; skipped");
                skipped.push(q.clone());
            }
            Some(rel) => match engine.scan(q) {
                Err(Error::EmptyQuery) => {
                    warn!("query `{q}` has no content terms; skipped");
                    skipped.push(q.clone());
                }
                Err(e) => return Err(e),
                Ok(_) => runnable.push((q, *rel)),
            },
        }
    }

    let mut schemes = Vec::with_capacity(WeightingScheme::ALL.len());
    for scheme in WeightingScheme::ALL {
        let mut rows = Vec::with_capacity(runnable.len());
        for (q, rel) in &runnable {
            let out = engine.search_with(q, now, scheme, depth)?;
            let ids: Vec<&str> = out.hits.iter().map(|h| h.external_id.as_str()).collect();
            rows.push(QueryMetrics {
                query: (*q).clone(),
                path: out.query.path,
                executed: out.executed,
                precision: CUTOFFS.map(|k| precision_at(&ids, rel, k)),
                reciprocal_rank: reciprocal_rank(&ids, rel),
            });
        }
        let n = rows.len().max(1) as f64;
        let mut mean_precision = [0.0; 3];
        for (i, m) in mean_precision.iter_mut().enumerate() {
            *m = rows.iter().map(|r| r.precision[i]).sum::<f64>() / n;
        }
        let mrr = rows.iter().map(|r| r.reciprocal_rank).sum::<f64>() / n;
        schemes.push(SchemeReport {
            scheme,
            queries: rows,
            mean_precision,
            mrr,
        });
    }
    Ok(EvalReport {
        now,
        schemes,
        skipped,
    })
}
