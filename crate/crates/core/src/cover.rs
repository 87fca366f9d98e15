//! Generic minimal-cover engine over a subset-goodness oracle.
//!
//! Used by the category invariants, whose goodness predicates (restriction
//! contracts to a point, restriction is homotopic to a constant) are
//! downward closed just like distance goodness: restricting a witness gives
//! a witness, and when the contraction target falls outside the smaller set
//! the trajectory of any remaining point is an r-path that drags the
//! constant back inside. The engine therefore prunes subsets of known good
//! sets and supersets of known bad sets, and only ever exports witnesses for
//! sets it decided directly.

use std::collections::HashMap;

use crate::distance::{min_cover, DistanceError, SubsetVerdict, LATTICE_CAP};
use crate::homotopy::Homotopy;

pub(crate) enum CoverOutcome {
    Exact {
        sets: Vec<u64>,
        witnesses: Vec<Homotopy>,
    },
    Truncated {
        lower: usize,
        upper: usize,
        note: String,
    },
}

/// Minimal cover of {0..n-1} by good sets. `decide` is consulted once per
/// undominated subset, in decreasing size order; singletons are assumed good
/// (true for every contractibility-style predicate) but are still verified.
pub(crate) fn minimal_cover_by(
    n: usize,
    mut decide: impl FnMut(u64) -> Result<SubsetVerdict, DistanceError>,
) -> Result<CoverOutcome, DistanceError> {
    assert!(n >= 1 && n <= 64);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut good: Vec<u64> = Vec::new();
    let mut bad: Vec<u64> = Vec::new();
    let mut witnesses: HashMap<u64, Homotopy> = HashMap::new();

    let mut run = |mask: u64,
                   good: &mut Vec<u64>,
                   bad: &mut Vec<u64>,
                   witnesses: &mut HashMap<u64, Homotopy>|
     -> Result<Option<()>, DistanceError> {
        match decide(mask)? {
            SubsetVerdict::Good(h) => {
                good.push(mask);
                witnesses.insert(mask, h);
                Ok(Some(()))
            }
            SubsetVerdict::Bad { .. } => {
                bad.push(mask);
                Ok(Some(()))
            }
            SubsetVerdict::Unknown { .. } => Ok(None),
        }
    };

    // singletons, then the whole set
    for x in 0..n {
        let mask = 1u64 << x;
        if run(mask, &mut good, &mut bad, &mut witnesses)?.is_none() {
            return Ok(CoverOutcome::Truncated {
                lower: 0,
                upper: n.saturating_sub(1),
                note: format!("budget exhausted on singleton {x}"),
            });
        }
        if !good.contains(&mask) {
            // A contractibility predicate that rejects a singleton indicates
            // a caller bug rather than a mathematical outcome.
            panic!("singleton {x} rejected by a contractibility-style predicate");
        }
    }
    if n > 1 {
        match run(full, &mut good, &mut bad, &mut witnesses)? {
            None => {
                return Ok(CoverOutcome::Truncated {
                    lower: 0,
                    upper: n - 1,
                    note: "budget exhausted on the whole space".to_string(),
                })
            }
            Some(()) if good.contains(&full) => {
                return Ok(CoverOutcome::Exact {
                    sets: vec![full],
                    witnesses: vec![witnesses.remove(&full).expect("just decided")],
                })
            }
            Some(()) => {}
        }
    } else {
        return Ok(CoverOutcome::Exact {
            sets: vec![full],
            witnesses: vec![witnesses.remove(&full).expect("singleton decided")],
        });
    }

    if n > LATTICE_CAP {
        return Ok(CoverOutcome::Truncated {
            lower: 1,
            upper: n - 1,
            note: format!("space has {n} points (> {LATTICE_CAP}); whole-space answer is exact, cover size is not"),
        });
    }

    let mut by_popcount: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for mask in 1..=full {
        by_popcount[mask.count_ones() as usize].push(mask);
    }
    for size in (2..n).rev() {
        for &mask in &by_popcount[size] {
            if good.iter().any(|sup| sup & mask == mask) {
                continue;
            }
            if bad.iter().any(|sub| sub & mask == *sub) {
                continue;
            }
            if run(mask, &mut good, &mut bad, &mut witnesses)?.is_none() {
                let upper = {
                    // greedy over known goods plus singletons
                    let mut sets = good.clone();
                    sets.extend((0..n).map(|x| 1u64 << x));
                    min_cover(full, &sets).map_or(n - 1, |c| c.len() - 1)
                };
                return Ok(CoverOutcome::Truncated {
                    lower: 1,
                    upper,
                    note: format!("budget exhausted on a {size}-point subset"),
                });
            }
        }
    }

    // maximal good sets suffice for a minimal cover
    let maximal: Vec<u64> = good
        .iter()
        .copied()
        .filter(|m| !good.iter().any(|sup| sup != m && sup & m == *m))
        .collect();
    let sets = min_cover(full, &maximal).expect("singletons are good");
    let ws = sets
        .iter()
        .map(|m| witnesses.get(m).expect("maximal sets were decided directly").clone())
        .collect();
    Ok(CoverOutcome::Exact { sets, witnesses: ws })
}
