use crate::error::Result;
use crate::index::{InvertedIndex, ItemId};
use crate::scalar::Real;
use crate::weighting::distinct;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityParams<T> {
    /// two occurrences are in the same window when their positions differ
    /// by less than this
    pub window: u32,
    pub ordered_weight: T,
    pub unordered_weight: T,
}

impl<T: Real> Default for ProximityParams<T> {
    fn default() -> Self {
        Self {
            window: 8,
            ordered_weight: T::one(),
            unordered_weight: T::lit(0.5),
        }
    }
}

/// Term-dependency feature of an item for a query.
///
/// `ordered_weight` × (occurrences of each adjacent query bigram, in query
/// order, at consecutive positions) plus `unordered_weight` × (occurrence
/// pairs of two distinct query stems lying inside one window).
pub fn proximity_feature<T: Real, S: AsRef<str>>(
    index: &InvertedIndex,
    query: &[S],
    item: ItemId,
    params: &ProximityParams<T>,
) -> Result<T> {
    index.item(item)?;
    let lookup = |term: &str| -> &[u32] {
        index
            .term_id(term)
            .and_then(|tid| index.positions(tid, item))
            .unwrap_or(&[])
    };
    Ok(proximity_from_positions(query, lookup, params))
}

/// Same feature over an arbitrary position lookup.
pub fn proximity_from_positions<'p, T: Real, S: AsRef<str>>(
    query: &[S],
    positions: impl Fn(&str) -> &'p [u32],
    params: &ProximityParams<T>,
) -> T {
    let unique = distinct(query);
    if unique.len() < 2 {
        return T::zero();
    }

    let mut ordered = 0u64;
    for pair in query.windows(2) {
        let (first, second) = (pair[0].as_ref(), pair[1].as_ref());
        let next = positions(second);
        ordered += positions(first)
            .iter()
            .filter(|&&p| next.binary_search(&(p + 1)).is_ok())
            .count() as u64;
    }

    let mut unordered = 0u64;
    let reach = params.window.saturating_sub(1);
    for (i, a) in unique.iter().enumerate() {
        let pa = positions(a);
        for b in &unique[i + 1..] {
            let pb = positions(b);
            for &p in pa {
                let lo = pb.partition_point(|&x| x < p.saturating_sub(reach));
                let hi = pb.partition_point(|&x| x <= p.saturating_add(reach));
                unordered += (hi - lo) as u64;
            }
        }
    }

    params.ordered_weight * T::count(ordered) + params.unordered_weight * T::count(unordered)
}
