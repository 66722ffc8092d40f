//! TF-IDF term weighting with three length normalizations.
//!
//! A weight is `tf × idf × norm`. Two IDF variants and three normalizations
//! give the six [`WeightingScheme`]s. Query-item similarity is the dot
//! product of the item's weights with a binary vector over distinct query
//! stems.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::index::{InvertedIndex, ItemId};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdfVariant {
    /// ln(D / d)
    Idf1,
    /// ln(d)
    Idf2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormVariant {
    Cosine,
    PivotedCosine,
    PivotedUnique,
}

/// Which length statistic the pivoted-cosine normalization pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PivotStat {
    /// kept token count of the item
    #[default]
    Length,
    /// Euclidean norm of the item's tf·idf vector
    CosineNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightingScheme {
    pub idf: IdfVariant,
    pub norm: NormVariant,
}

impl WeightingScheme {
    pub const ALL: [WeightingScheme; 6] = [
        WeightingScheme::new(IdfVariant::Idf1, NormVariant::Cosine),
        WeightingScheme::new(IdfVariant::Idf1, NormVariant::PivotedCosine),
        WeightingScheme::new(IdfVariant::Idf1, NormVariant::PivotedUnique),
        WeightingScheme::new(IdfVariant::Idf2, NormVariant::Cosine),
        WeightingScheme::new(IdfVariant::Idf2, NormVariant::PivotedCosine),
        WeightingScheme::new(IdfVariant::Idf2, NormVariant::PivotedUnique),
    ];

    pub const fn new(idf: IdfVariant, norm: NormVariant) -> Self {
        Self { idf, norm }
    }

    pub fn all() -> impl Iterator<Item = WeightingScheme> {
        Self::ALL.into_iter()
    }
}

impl Default for WeightingScheme {
    fn default() -> Self {
        Self::new(IdfVariant::Idf1, NormVariant::PivotedCosine)
    }
}

impl fmt::Display for IdfVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdfVariant::Idf1 => "idf1",
            IdfVariant::Idf2 => "idf2",
        })
    }
}

impl fmt::Display for NormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormVariant::Cosine => "cosine",
            NormVariant::PivotedCosine => "pivoted_cosine",
            NormVariant::PivotedUnique => "pivoted_unique",
        })
    }
}

impl fmt::Display for PivotStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PivotStat::Length => "length",
            PivotStat::CosineNorm => "cosine_norm",
        })
    }
}

impl fmt::Display for WeightingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.idf, self.norm)
    }
}

impl FromStr for IdfVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "idf1" => Ok(IdfVariant::Idf1),
            "idf2" => Ok(IdfVariant::Idf2),
            _ => Err(Error::InvalidParameter(format!(
                "unknown idf variant `{s}`"
            ))),
        }
    }
}

impl FromStr for NormVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cosine" => Ok(NormVariant::Cosine),
            "pivoted_cosine" => Ok(NormVariant::PivotedCosine),
            "pivoted_unique" => Ok(NormVariant::PivotedUnique),
            _ => Err(Error::InvalidParameter(format!(
                "unknown normalization `{s}`"
            ))),
        }
    }
}

impl FromStr for PivotStat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "length" => Ok(PivotStat::Length),
            "cosine_norm" => Ok(PivotStat::CosineNorm),
            _ => Err(Error::InvalidParameter(format!("unknown pivot_stat `{s}`"))),
        }
    }
}

impl FromStr for WeightingScheme {
    type Err = Error;
    /// Parses `idf1+cosine` style names.
    fn from_str(s: &str) -> Result<Self> {
        let (idf, norm) = s
            .split_once('+')
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scheme `{s}`")))?;
        Ok(Self::new(idf.parse()?, norm.parse()?))
    }
}

/// Slope and pivot of a pivoted normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotParams<T> {
    slope: T,
    pivot: T,
}

impl<T: Real> PivotParams<T> {
    pub fn new(slope: T, pivot: T) -> Result<Self> {
        if !(slope >= T::zero() && slope <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "slope must lie in [0, 1], got {slope}"
            )));
        }
        if !(pivot > T::zero() && pivot.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pivot must be positive and finite, got {pivot}"
            )));
        }
        Ok(Self { slope, pivot })
    }

    pub fn slope(&self) -> T {
        self.slope
    }

    pub fn pivot(&self) -> T {
        self.pivot
    }

    /// `1 / ((1 - slope) * pivot + slope * stat)`.
    ///
    /// Evaluated as `pivot + slope * (stat - pivot)` so the pivot point
    /// returns exactly `1 / pivot`. A non-positive denominator (only
    /// reachable for a zero statistic at slope 1) yields 1.
    pub fn factor(&self, stat: T) -> T {
        let denom = self.pivot + self.slope * (stat - self.pivot);
        if denom > T::zero() {
            denom.recip()
        } else {
            T::one()
        }
    }
}

/// ln(D / d); 0 for terms that occur nowhere.
pub fn idf1<T: Real>(item_count: u32, df: u32) -> T {
    if df == 0 || item_count == 0 {
        return T::zero();
    }
    (T::count(u64::from(item_count)) / T::count(u64::from(df))).ln()
}

/// ln(d); 0 for terms that occur nowhere.
pub fn idf2<T: Real>(df: u32) -> T {
    if df == 0 {
        return T::zero();
    }
    T::count(u64::from(df)).ln()
}

/// Reciprocal of a Euclidean norm; 1 for the all-zero vector.
pub fn cosine_factor<T: Real>(norm: T) -> T {
    if norm > T::zero() {
        norm.recip()
    } else {
        T::one()
    }
}

/// How the pivot is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Pivot<T> {
    /// corpus mean of the pivoted statistic
    #[default]
    Auto,
    Fixed(T),
}

/// Everything needed to turn an index into scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingParams<T> {
    pub scheme: WeightingScheme,
    pub slope: T,
    pub pivot: Pivot<T>,
    pub pivot_stat: PivotStat,
}

impl<T: Real> Default for WeightingParams<T> {
    fn default() -> Self {
        Self {
            scheme: WeightingScheme::default(),
            slope: T::lit(0.25),
            pivot: Pivot::Auto,
            pivot_stat: PivotStat::Length,
        }
    }
}

impl<T: Real> WeightingParams<T> {
    pub fn with_scheme(scheme: WeightingScheme) -> Self {
        Self {
            scheme,
            ..Self::default()
        }
    }
}

/// Scores items of one frozen index under one weighting configuration.
///
/// Construction precomputes the IDF of every term and the normalization
/// factor of every item, so each weight lookup is a binary search.
#[derive(Debug, Clone)]
pub struct Scorer<'a, T> {
    index: &'a InvertedIndex,
    scheme: WeightingScheme,
    params: PivotParams<T>,
    pivot_stat: PivotStat,
    idf: Vec<T>,
    cosine_norm: Vec<T>,
    factor: Vec<T>,
}

impl<'a, T: Real> Scorer<'a, T> {
    pub fn new(index: &'a InvertedIndex, params: &WeightingParams<T>) -> Result<Self> {
        let stats = index.stats();
        let scheme = params.scheme;
        let idf: Vec<T> = (0..index.vocabulary_size() as u32)
            .map(|tid| {
                let df = index.document_frequency_by_id(tid);
                match scheme.idf {
                    IdfVariant::Idf1 => idf1(stats.item_count, df),
                    IdfVariant::Idf2 => idf2(df),
                }
            })
            .collect();
        let cosine_norm: Vec<T> = (0..index.len() as ItemId)
            .map(|id| {
                let terms = index.item_terms(id).expect("dense ids");
                terms
                    .iter()
                    .map(|&(tid, tf)| {
                        let w = T::count(u64::from(tf)) * idf[tid as usize];
                        w * w
                    })
                    .sum::<T>()
                    .sqrt()
            })
            .collect();

        let pivot = match params.pivot {
            Pivot::Fixed(p) => p,
            Pivot::Auto => {
                let mean = match (scheme.norm, params.pivot_stat) {
                    (NormVariant::PivotedUnique, _) => T::lit(stats.avg_unique),
                    (_, PivotStat::Length) => T::lit(stats.avg_length),
                    (_, PivotStat::CosineNorm) if cosine_norm.is_empty() => T::zero(),
                    (_, PivotStat::CosineNorm) => {
                        cosine_norm.iter().copied().sum::<T>() / T::count(cosine_norm.len() as u64)
                    }
                };
                if mean > T::zero() {
                    mean
                } else {
                    T::one()
                }
            }
        };
        let pivot_params = PivotParams::new(params.slope, pivot)?;

        let mut scorer = Self {
            index,
            scheme,
            params: pivot_params,
            pivot_stat: params.pivot_stat,
            idf,
            cosine_norm,
            factor: Vec::new(),
        };
        scorer.factor = (0..index.len() as ItemId)
            .map(|id| scorer.compute_factor(id))
            .collect();
        Ok(scorer)
    }

    pub fn index(&self) -> &'a InvertedIndex {
        self.index
    }

    pub fn scheme(&self) -> WeightingScheme {
        self.scheme
    }

    pub fn params(&self) -> PivotParams<T> {
        self.params
    }

    pub fn tf(&self, term: &str, item: ItemId) -> Result<u32> {
        self.index.tf(term, item)
    }

    pub fn idf(&self, term: &str) -> T {
        self.index
            .term_id(term)
            .map_or(T::zero(), |tid| self.idf[tid as usize])
    }

    pub fn norm_cosine(&self, item: ItemId) -> Result<T> {
        self.cosine_norm
            .get(item as usize)
            .map(|&n| cosine_factor(n))
            .ok_or(Error::UnknownItem(item))
    }

    pub fn norm_pivoted_cosine(&self, item: ItemId) -> Result<T> {
        let entry = self.index.item(item)?;
        let stat = match self.pivot_stat {
            PivotStat::Length => T::count(u64::from(entry.length)),
            PivotStat::CosineNorm => self.cosine_norm[item as usize],
        };
        Ok(self.params.factor(stat))
    }

    pub fn norm_pivoted_unique(&self, item: ItemId) -> Result<T> {
        let entry = self.index.item(item)?;
        Ok(self.params.factor(T::count(u64::from(entry.unique))))
    }

    fn compute_factor(&self, item: ItemId) -> T {
        match self.scheme.norm {
            NormVariant::Cosine => self.norm_cosine(item),
            NormVariant::PivotedCosine => self.norm_pivoted_cosine(item),
            NormVariant::PivotedUnique => self.norm_pivoted_unique(item),
        }
        .expect("dense ids")
    }

    /// Normalization factor of the configured scheme.
    pub fn norm(&self, item: ItemId) -> Result<T> {
        self.factor
            .get(item as usize)
            .copied()
            .ok_or(Error::UnknownItem(item))
    }

    pub fn term_weight(&self, term: &str, item: ItemId) -> Result<T> {
        let norm = self.norm(item)?;
        let Some(tid) = self.index.term_id(term) else {
            return Ok(T::zero());
        };
        let terms = self.index.item_terms(item)?;
        Ok(match terms.binary_search_by_key(&tid, |&(t, _)| t) {
            Ok(i) => T::count(u64::from(terms[i].1)) * self.idf[tid as usize] * norm,
            Err(_) => T::zero(),
        })
    }

    /// Sum of term weights over the distinct query stems.
    pub fn similarity<S: AsRef<str>>(&self, query_terms: &[S], item: ItemId) -> Result<T> {
        let mut total = T::zero();
        for term in distinct(query_terms) {
            total = total + self.term_weight(term, item)?;
        }
        Ok(total)
    }
}

/// Distinct terms in first-appearance order.
pub fn distinct<S: AsRef<str>>(terms: &[S]) -> Vec<&str> {
    let mut seen = std::collections::HashSet::new();
    terms
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| seen.insert(*t))
        .collect()
}
