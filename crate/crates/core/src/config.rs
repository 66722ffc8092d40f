//! `key = value` configuration shared by the engine and the CLI.

use std::path::{Path, PathBuf};

use crate::dispatch::{DispatchConfig, ThresholdRule};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sentence_expansion::{
    ExpansionModel, ExpansionParams, FeedbackGranularity, ProximityParams,
};
use crate::text::StopwordSet;
use crate::tweet_search::{RankWeights, TweetParams};
use crate::weighting::{
    IdfVariant, NormVariant, Pivot, PivotStat, WeightingParams, WeightingScheme,
};

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub stopwords_file: Option<PathBuf>,
    pub idf_variant: IdfVariant,
    pub norm_variant: NormVariant,
    pub slope: f64,
    pub pivot: Pivot<f64>,
    pub pivot_stat: PivotStat,
    pub half_life_seconds: f64,
    pub rank_weights: [f64; 3],
    pub expansion_model: ExpansionModel,
    pub mu: f64,
    pub n_feedback: usize,
    pub k_expansion: usize,
    pub lambda: f64,
    pub proximity_window: u32,
    pub feedback_granularity: FeedbackGranularity,
    pub tweet_length_threshold: usize,
    pub dispatch_rule: ThresholdRule,
    /// number of results returned per query
    pub top_k: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let scheme = WeightingScheme::default();
        Self {
            stopwords_file: None,
            idf_variant: scheme.idf,
            norm_variant: scheme.norm,
            slope: 0.25,
            pivot: Pivot::Auto,
            pivot_stat: PivotStat::Length,
            half_life_seconds: 3600.0,
            rank_weights: [0.6, 0.25, 0.15],
            expansion_model: ExpansionModel::default(),
            mu: 10.0,
            n_feedback: 10,
            k_expansion: 10,
            lambda: 0.5,
            proximity_window: 8,
            feedback_granularity: FeedbackGranularity::default(),
            tweet_length_threshold: 3,
            dispatch_rule: ThresholdRule::Inclusive,
            top_k: 10,
        }
    }
}

const KEYS: [&str; 18] = [
    "stopwords_file",
    "idf_variant",
    "norm_variant",
    "slope",
    "pivot",
    "pivot_stat",
    "half_life_seconds",
    "rank_weights",
    "expansion_model",
    "mu",
    "n_feedback",
    "k_expansion",
    "lambda",
    "proximity_window",
    "feedback_granularity",
    "tweet_length_threshold",
    "dispatch_rule",
    "top_k",
];

impl EngineConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown or
    /// repeated keys are errors. Relative `stopwords_file` paths resolve
    /// against `base_dir` when given.
    pub fn parse(body: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (n, raw) in body.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if seen.contains(&key) {
                return Err(err(format!("key `{key}` given twice")));
            }
            seen.push(key);
            cfg.set(key, value, base_dir).map_err(|e| match e {
                Error::InvalidParameter(m) => err(m),
                other => err(other.to_string()),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let body = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Self::parse(&body, path.parent())
    }

    fn set(&mut self, key: &str, value: &str, base_dir: Option<&Path>) -> Result<()> {
        match key {
            "stopwords_file" => {
                let p = PathBuf::from(value);
                self.stopwords_file = Some(match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p,
                });
            }
            "idf_variant" => self.idf_variant = value.parse()?,
            "norm_variant" => self.norm_variant = value.parse()?,
            "slope" => self.slope = number(value)?,
            "pivot" => {
                self.pivot = if value.eq_ignore_ascii_case("auto") {
                    Pivot::Auto
                } else {
                    Pivot::Fixed(number(value)?)
                }
            }
            "pivot_stat" => self.pivot_stat = value.parse()?,
            "half_life_seconds" => self.half_life_seconds = number(value)?,
            "rank_weights" => {
                let parts: Vec<f64> = value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(number)
                    .collect::<Result<_>>()?;
                self.rank_weights = parts.try_into().map_err(|_| {
                    Error::InvalidParameter("rank_weights needs exactly three numbers".into())
                })?;
            }
            "expansion_model" => self.expansion_model = value.parse()?,
            "mu" => self.mu = number(value)?,
            "n_feedback" => self.n_feedback = integer(value)?,
            "k_expansion" => self.k_expansion = integer(value)?,
            "lambda" => self.lambda = number(value)?,
            "proximity_window" => self.proximity_window = integer(value)?,
            "feedback_granularity" => self.feedback_granularity = value.parse()?,
            "tweet_length_threshold" => self.tweet_length_threshold = integer(value)?,
            "dispatch_rule" => self.dispatch_rule = value.parse()?,
            "top_k" => self.top_k = integer(value)?,
            _ => unreachable!("key list checked by caller"),
        }
        Ok(())
    }

    /// Checks every value range, so later conversions cannot fail.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(0.0..=1.0).contains(&self.slope) {
            return bad("slope must lie in [0, 1]");
        }
        if let Pivot::Fixed(p) = self.pivot {
            if !(p > 0.0 && p.is_finite()) {
                return bad("pivot must be positive");
            }
        }
        if !(self.half_life_seconds > 0.0 && self.half_life_seconds.is_finite()) {
            return bad("half_life_seconds must be positive");
        }
        RankWeights::new(
            self.rank_weights[0],
            self.rank_weights[1],
            self.rank_weights[2],
        )?;
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return bad("mu must be positive");
        }
        if self.n_feedback == 0 {
            return bad("n_feedback must be positive");
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return bad("lambda must lie in [0, 1]");
        }
        if self.proximity_window == 0 {
            return bad("proximity_window must be positive");
        }
        if self.tweet_length_threshold == 0 {
            return bad("tweet_length_threshold must be at least 1");
        }
        if self.top_k == 0 {
            return bad("top_k must be positive");
        }
        Ok(())
    }

    pub fn scheme(&self) -> WeightingScheme {
        WeightingScheme::new(self.idf_variant, self.norm_variant)
    }

    pub fn stopwords(&self) -> Result<StopwordSet> {
        match &self.stopwords_file {
            Some(path) => StopwordSet::from_file(path),
            None => Ok(StopwordSet::default()),
        }
    }

    pub fn weighting_params<T: Real>(&self, scheme: WeightingScheme) -> WeightingParams<T> {
        WeightingParams {
            scheme,
            slope: T::lit(self.slope),
            pivot: match self.pivot {
                Pivot::Auto => Pivot::Auto,
                Pivot::Fixed(p) => Pivot::Fixed(T::lit(p)),
            },
            pivot_stat: self.pivot_stat,
        }
    }

    pub fn tweet_params<T: Real>(&self, scheme: WeightingScheme) -> Result<TweetParams<T>> {
        let [a, b, c] = self.rank_weights;
        Ok(TweetParams {
            weighting: self.weighting_params(scheme),
            weights: RankWeights::new(T::lit(a), T::lit(b), T::lit(c))?,
            half_life: T::lit(self.half_life_seconds),
        })
    }

    pub fn expansion_params<T: Real>(&self, scheme: WeightingScheme) -> ExpansionParams<T> {
        ExpansionParams {
            model: self.expansion_model,
            mu: T::lit(self.mu),
            n_feedback: self.n_feedback,
            k_expansion: self.k_expansion,
            lambda: T::lit(self.lambda),
            proximity: ProximityParams {
                window: self.proximity_window,
                ..ProximityParams::default()
            },
            granularity: self.feedback_granularity,
            weighting: self.weighting_params(scheme),
        }
    }

    pub fn dispatch(&self) -> Result<DispatchConfig> {
        DispatchConfig::new(self.tweet_length_threshold, self.dispatch_rule)
    }
}

fn number(value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidParameter(format!("`{value}` is not a number")))
}

fn integer<I: std::str::FromStr>(value: &str) -> Result<I> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("`{value}` is not a non-negative integer")))
}
