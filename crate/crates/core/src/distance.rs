//! Homotopic distance: the minimal number of cover sets, minus one, on which
//! the two maps' restrictions are discretely homotopic.
//!
//! Good subsets are downward closed (restricting a witness gives a witness),
//! so minimal covers can be sought among maximal good sets, and a bad subset
//! condemns every superset. Infinity detection by singletons is sound and
//! complete: a cover exists iff every singleton is good.

use thiserror::Error;

use crate::homotopy::{restrict_homotopy, Homotopy, HomotopyError};
use crate::maps::{restrict, LipschitzMap, MapError, ScaleParams};
use crate::scalar::Scalar;
use crate::search::{find_homotopy, HomotopyVerdict, SearchError};
use crate::space::{r_components, same_space, shortest_r_path, PointSubset, SpaceError};

/// Subset-lattice sweeps stay exact up to this many domain points; larger
/// domains fall back to the exact 0/1/infinity cases plus honest bounds.
pub const LATTICE_CAP: usize = 16;

/// Domains are tracked as bitmasks.
pub const MAX_DOMAIN: usize = 64;

#[derive(Debug, Error)]
pub enum DistanceError {
    #[error("maps must share domain and codomain")]
    SpaceMismatch,
    #[error("scale s = {s} is below the Lipschitz constant {lip} of one of the maps")]
    ScaleTooSmall { s: Scalar, lip: Scalar },
    #[error("domain has {0} points; cover search supports at most {MAX_DOMAIN}")]
    DomainTooLarge(usize),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

/// Distance verdict with certificates. `Bounded` appears only when a budget
/// truncated some subset decision.
#[derive(Debug)]
pub enum DistanceResult {
    Finite {
        k: usize,
        cover: Vec<PointSubset>,
        witnesses: Vec<Homotopy>,
    },
    Infinite {
        bad_point: usize,
        reason: String,
    },
    Bounded {
        lower: usize,
        upper: usize,
        note: String,
    },
}

impl DistanceResult {
    pub fn finite_k(&self) -> Option<usize> {
        match self {
            DistanceResult::Finite { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn value_str(&self) -> String {
        match self {
            DistanceResult::Finite { k, .. } => k.to_string(),
            DistanceResult::Infinite { .. } => "inf".to_string(),
            DistanceResult::Bounded { lower, upper, .. } => format!("{lower}..{upper}"),
        }
    }
}

/// Tri-state answer for one subset.
#[derive(Debug)]
pub enum SubsetVerdict {
    Good(Homotopy),
    Bad { explored: usize },
    Unknown { visited: usize },
}

/// Cached cover-search state for one (f, g, s, r) query. Downward closure is
/// exploited through the recorded families: a subset of a known good set is
/// good (restrict the witness), a superset of a known bad set is bad.
pub struct DistanceSolver {
    f: LipschitzMap,
    g: LipschitzMap,
    pub params: ScaleParams,
    pub budget: u64,
    n: usize,
    good: Vec<(u64, Homotopy)>,
    bad: Vec<u64>,
    truncated: bool,
}

fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

impl DistanceSolver {
    pub fn new(
        f: &LipschitzMap,
        g: &LipschitzMap,
        params: ScaleParams,
        budget: u64,
    ) -> Result<DistanceSolver, DistanceError> {
        if !same_space(&f.domain, &g.domain) || !same_space(&f.codomain, &g.codomain) {
            return Err(DistanceError::SpaceMismatch);
        }
        let lip = f.lipschitz_constant().max(g.lipschitz_constant());
        if params.s < lip {
            return Err(DistanceError::ScaleTooSmall { s: params.s, lip });
        }
        let n = f.domain.len();
        if n > MAX_DOMAIN {
            return Err(DistanceError::DomainTooLarge(n));
        }
        Ok(DistanceSolver {
            f: f.clone(),
            g: g.clone(),
            params,
            budget,
            n,
            good: Vec::new(),
            bad: Vec::new(),
            truncated: false,
        })
    }

    fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn subset_of(&self, mask: u64) -> PointSubset {
        PointSubset::new(&self.f.domain, mask_indices(mask)).expect("nonempty mask")
    }

    /// Pre-seed a known-good subset, e.g. from a lower r in a sweep or from
    /// an externally constructed witness. The witness is trusted here and
    /// re-verified wherever certificates are exported.
    pub fn seed_good(&mut self, mask: u64, witness: Homotopy) {
        self.good.push((mask, witness));
    }

    fn witness_for_subset(&self, sup_mask: u64, witness: &Homotopy, sub_mask: u64) -> Homotopy {
        if sup_mask == sub_mask {
            return witness.clone();
        }
        let sup = mask_indices(sup_mask);
        let sub = mask_indices(sub_mask);
        let positions: Vec<usize> = sub
            .iter()
            .map(|i| sup.binary_search(i).expect("subset of superset"))
            .collect();
        let sup_domain = &witness.first().domain;
        let inner = PointSubset::new(sup_domain, positions).expect("nonempty");
        restrict_homotopy(witness, &inner).expect("restriction of a witness")
    }

    /// Decide one subset, consulting the closure caches first.
    pub fn is_good_subset(&mut self, mask: u64) -> Result<SubsetVerdict, DistanceError> {
        debug_assert!(mask != 0 && mask <= self.full_mask());
        let cached = self
            .good
            .iter()
            .find(|(sup, _)| sup & mask == mask)
            .map(|(sup, witness)| (*sup, witness.clone()));
        if let Some((sup, witness)) = cached {
            return Ok(SubsetVerdict::Good(self.witness_for_subset(sup, &witness, mask)));
        }
        if self.bad.iter().any(|sub| sub & mask == *sub) {
            return Ok(SubsetVerdict::Bad { explored: 0 });
        }

        let subset = self.subset_of(mask);
        let fu = restrict(&self.f, &subset)?;
        let gu = restrict(&self.g, &subset)?;
        match find_homotopy(&fu, &gu, self.params, self.budget)? {
            HomotopyVerdict::Found(h) => {
                self.good.push((mask, h.clone()));
                Ok(SubsetVerdict::Good(h))
            }
            HomotopyVerdict::NotHomotopic { explored } => {
                self.bad.push(mask);
                Ok(SubsetVerdict::Bad { explored })
            }
            HomotopyVerdict::BudgetExceeded { visited } => {
                self.truncated = true;
                Ok(SubsetVerdict::Unknown { visited })
            }
        }
    }

    /// Singleton goodness reduces to an r-path between the two image points;
    /// the witness is the constant-frame homotopy along a shortest one.
    fn singleton_witness(&mut self, x: usize) -> Result<Option<Homotopy>, DistanceError> {
        let mask = 1u64 << x;
        let subset = self.subset_of(mask);
        let domain = crate::space::subspace(&self.f.domain, &subset)?;
        let path = match shortest_r_path(&self.f.codomain, self.params.r, self.f.apply(x), self.g.apply(x)) {
            Some(p) => p,
            None => return Ok(None),
        };
        let frames = path
            .points
            .iter()
            .map(|&y| LipschitzMap::constant(&domain, &self.f.codomain, y))
            .collect::<Result<Vec<_>, _>>()?;
        let witness = Homotopy {
            frames,
            params: self.params,
        };
        self.good.push((mask, witness.clone()));
        Ok(Some(witness))
    }

    /// The full distance computation.
    pub fn homotopic_distance(&mut self) -> Result<DistanceResult, DistanceError> {
        let full = self.full_mask();

        // Singletons first: any bad singleton makes every cover impossible.
        let components = r_components(&self.f.codomain, self.params.r);
        let comp_of = |y: usize| components.iter().position(|c| c.contains(&y)).unwrap();
        for x in 0..self.n {
            if comp_of(self.f.apply(x)) != comp_of(self.g.apply(x)) {
                return Ok(DistanceResult::Infinite {
                    bad_point: x,
                    reason: format!(
                        "no r-path joins {} and {} in the codomain at r = {}",
                        self.f.codomain.label(self.f.apply(x)),
                        self.f.codomain.label(self.g.apply(x)),
                        self.params.r
                    ),
                });
            }
            self.singleton_witness(x)?
                .expect("same component implies an r-path");
        }

        // Whole domain good means distance zero.
        match self.is_good_subset(full)? {
            SubsetVerdict::Good(h) => {
                return Ok(DistanceResult::Finite {
                    k: 0,
                    cover: vec![PointSubset::full(&self.f.domain)],
                    witnesses: vec![h],
                })
            }
            SubsetVerdict::Bad { .. } => {}
            SubsetVerdict::Unknown { .. } => {
                let (upper, _, _) = self.greedy_cover_from_known();
                return Ok(DistanceResult::Bounded {
                    lower: 0,
                    upper,
                    note: "budget exhausted on the whole domain".to_string(),
                });
            }
        }

        if self.n <= LATTICE_CAP {
            self.exact_by_lattice(full)
        } else {
            self.bounded_by_growth(full)
        }
    }

    /// Exhaustive subset-lattice sweep in decreasing popcount order. Every
    /// subset is either pruned by the closure caches or decided by search,
    /// so the surviving good family contains all maximal good sets.
    fn exact_by_lattice(&mut self, full: u64) -> Result<DistanceResult, DistanceError> {
        let n = self.n;
        let mut by_popcount: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        for mask in 1..=full {
            by_popcount[mask.count_ones() as usize].push(mask);
        }
        for size in (2..n).rev() {
            for &mask in &by_popcount[size] {
                if self.good.iter().any(|(sup, _)| sup & mask == mask) {
                    continue;
                }
                if self.bad.iter().any(|sub| sub & mask == *sub) {
                    continue;
                }
                let subset = self.subset_of(mask);
                let fu = restrict(&self.f, &subset)?;
                let gu = restrict(&self.g, &subset)?;
                match find_homotopy(&fu, &gu, self.params, self.budget)? {
                    HomotopyVerdict::Found(h) => self.good.push((mask, h)),
                    HomotopyVerdict::NotHomotopic { .. } => self.bad.push(mask),
                    HomotopyVerdict::BudgetExceeded { .. } => {
                        self.truncated = true;
                        let (upper, _, _) = self.greedy_cover_from_known();
                        return Ok(DistanceResult::Bounded {
                            lower: 1,
                            upper,
                            note: format!(
                                "budget exhausted on subset {:?}",
                                self.subset_of(mask)
                            ),
                        });
                    }
                }
            }
        }
        let maximal = self.maximal_good_masks();
        let cover = min_cover(full, &maximal).expect("singletons are good, a cover exists");
        self.finish_cover(cover)
    }

    /// Domains beyond the lattice cap: distance 0 and infinity were decided
    /// exactly above; a proven-bad whole domain plus a found 2-cover is
    /// still exact, anything else reports honest bounds.
    fn bounded_by_growth(&mut self, full: u64) -> Result<DistanceResult, DistanceError> {
        // Grow good sets greedily from each point in deterministic order,
        // then try to cover. Each extension attempt runs on a reduced budget
        // so a large domain degrades to bounds instead of stalling.
        let saved_budget = self.budget;
        self.budget = saved_budget.min(50_000);
        let mut grown: Vec<u64> = Vec::new();
        for seed in 0..self.n {
            if grown.iter().any(|m| m >> seed & 1 == 1) {
                continue;
            }
            let mut current = 1u64 << seed;
            for next in 0..self.n {
                if next == seed || current >> next & 1 == 1 {
                    continue;
                }
                let candidate = current | 1u64 << next;
                if matches!(self.is_good_subset(candidate)?, SubsetVerdict::Good(_)) {
                    current = candidate;
                }
            }
            grown.push(current);
        }
        self.budget = saved_budget;
        let covered = grown.iter().fold(0u64, |acc, m| acc | m);
        let cover_sets: Vec<u64> = if covered == full {
            min_cover(full, &grown).expect("grown sets cover the domain")
        } else {
            // fall back to singleton completion
            let mut sets = grown;
            for x in 0..self.n {
                if covered >> x & 1 == 0 {
                    sets.push(1u64 << x);
                }
            }
            min_cover(full, &sets).expect("covers the domain")
        };
        let upper = cover_sets.len() - 1;
        if upper == 1 {
            // whole domain is proven bad, so one set can never suffice
            return self.finish_cover(cover_sets);
        }
        Ok(DistanceResult::Bounded {
            lower: 1,
            upper,
            note: format!(
                "domain has {} points (> {LATTICE_CAP}); only 0, 1 and infinity are decided exactly",
                self.n
            ),
        })
    }

    fn maximal_good_masks(&self) -> Vec<u64> {
        let mut maximal: Vec<u64> = Vec::new();
        for (mask, _) in &self.good {
            if !self
                .good
                .iter()
                .any(|(other, _)| other != mask && other & mask == *mask)
            {
                if !maximal.contains(mask) {
                    maximal.push(*mask);
                }
            }
        }
        maximal.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        maximal
    }

    fn greedy_cover_from_known(&self) -> (usize, Vec<u64>, u64) {
        let full = self.full_mask();
        let mut sets = self.maximal_good_masks();
        for x in 0..self.n {
            if !sets.iter().any(|m| m >> x & 1 == 1) {
                sets.push(1u64 << x);
            }
        }
        let chosen = greedy_cover(full, &sets);
        let covered = chosen.iter().fold(0u64, |a, m| a | m);
        (chosen.len().saturating_sub(1), chosen, covered)
    }

    fn finish_cover(&mut self, cover_masks: Vec<u64>) -> Result<DistanceResult, DistanceError> {
        let mut cover = Vec::new();
        let mut witnesses = Vec::new();
        for mask in &cover_masks {
            let witness = match self.is_good_subset(*mask)? {
                SubsetVerdict::Good(h) => h,
                other => panic!("cover element lost its witness: {other:?}"),
            };
            cover.push(self.subset_of(*mask));
            witnesses.push(witness);
        }
        // Equalize horizons so exported certificates share one time axis.
        let m = witnesses.iter().map(|h| h.length()).max().unwrap_or(0);
        let witnesses = witnesses
            .iter()
            .map(|h| crate::homotopy::extend(h, m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DistanceResult::Finite {
            k: cover_masks.len() - 1,
            cover,
            witnesses,
        })
    }
}

/// Greedy set cover used for upper bounds; deterministic tie-breaking by
/// larger set, then smaller numeric mask.
fn greedy_cover(universe: u64, sets: &[u64]) -> Vec<u64> {
    let mut remaining = universe;
    let mut chosen = Vec::new();
    while remaining != 0 {
        let best = sets
            .iter()
            .copied()
            .max_by_key(|m| ((m & remaining).count_ones(), std::cmp::Reverse(*m)))
            .expect("sets cover the universe");
        if best & remaining == 0 {
            return chosen; // cannot finish; caller handles
        }
        chosen.push(best);
        remaining &= !best;
    }
    chosen
}

/// Exact minimal set cover by branch and bound: greedy upper bound, counting
/// lower bound, branching on the least-covered point, candidates ordered by
/// size then mask.
pub fn min_cover(universe: u64, sets: &[u64]) -> Option<Vec<u64>> {
    if universe == 0 {
        return Some(Vec::new());
    }
    let mut sets: Vec<u64> = sets
        .iter()
        .copied()
        .map(|m| m & universe)
        .filter(|&m| m != 0)
        .collect();
    sets.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    sets.dedup();
    if sets.iter().fold(0u64, |a, m| a | m) != universe {
        return None;
    }
    let greedy = greedy_cover(universe, &sets);
    let max_size = sets.iter().map(|m| m.count_ones()).max().unwrap() as usize;
    let mut best = greedy;
    let mut chosen: Vec<u64> = Vec::new();

    fn descend(
        remaining: u64,
        sets: &[u64],
        max_size: usize,
        chosen: &mut Vec<u64>,
        best: &mut Vec<u64>,
    ) {
        if remaining == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let lower = (remaining.count_ones() as usize).div_ceil(max_size);
        if chosen.len() + lower >= best.len() {
            return;
        }
        // branch on the uncovered point with the fewest covering sets
        let mut pivot = usize::MAX;
        let mut pivot_count = usize::MAX;
        for x in 0..64 {
            if remaining >> x & 1 == 1 {
                let count = sets.iter().filter(|m| *m >> x & 1 == 1).count();
                if count < pivot_count {
                    pivot = x;
                    pivot_count = count;
                }
            }
        }
        for &candidate in sets.iter().filter(|m| *m >> pivot & 1 == 1) {
            chosen.push(candidate);
            descend(remaining & !candidate, sets, max_size, chosen, best);
            chosen.pop();
        }
    }
    descend(universe, &sets, max_size, &mut chosen, &mut best);
    Some(best)
}

/// One-shot subset decision at the public surface.
pub fn is_good_subset(
    f: &LipschitzMap,
    g: &LipschitzMap,
    subset: &PointSubset,
    params: ScaleParams,
    budget: u64,
) -> Result<SubsetVerdict, DistanceError> {
    let mut solver = DistanceSolver::new(f, g, params, budget)?;
    let mask = subset
        .indices
        .iter()
        .fold(0u64, |acc, &i| acc | 1u64 << i);
    solver.is_good_subset(mask)
}

/// Scale defaulting: a homotopy query between f and g runs at
/// s = max(Lip f, Lip g) unless the caller passes a larger s.
pub fn default_scale(f: &LipschitzMap, g: &LipschitzMap) -> Scalar {
    f.lipschitz_constant().max(g.lipschitz_constant())
}

pub fn homotopic_distance(
    f: &LipschitzMap,
    g: &LipschitzMap,
    params: ScaleParams,
    budget: u64,
) -> Result<DistanceResult, DistanceError> {
    DistanceSolver::new(f, g, params, budget)?.homotopic_distance()
}

/// One row per r value, ascending; caches are warm-started across rows since
/// good sets stay good as r grows.
pub struct SweepRow {
    pub r: Scalar,
    pub result: DistanceResult,
}

pub fn dr_sweep(
    f: &LipschitzMap,
    g: &LipschitzMap,
    s: Scalar,
    r_values: &[Scalar],
    budget: u64,
) -> Result<Vec<SweepRow>, DistanceError> {
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut carried: Vec<(u64, Homotopy)> = Vec::new();
    for window in r_values.windows(2) {
        debug_assert!(window[0] <= window[1], "r values must be ascending");
    }
    for &r in r_values {
        let params = ScaleParams::new(s, r).map_err(|_| DistanceError::ScaleTooSmall {
            s,
            lip: Scalar::zero(),
        })?;
        let mut solver = DistanceSolver::new(f, g, params, budget)?;
        for (mask, witness) in &carried {
            solver.seed_good(
                *mask,
                Homotopy {
                    frames: witness.frames.clone(),
                    params,
                },
            );
        }
        let result = solver.homotopic_distance()?;
        carried = std::mem::take(&mut solver.good);
        rows.push(SweepRow { r, result });
    }
    // the staircase can only step down as r grows
    let finite: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, row)| row.result.finite_k().map(|k| (i, k)))
        .collect();
    for w in finite.windows(2) {
        debug_assert!(
            w[0].1 >= w[1].1,
            "distance increased along the sweep: {:?}",
            finite
        );
    }
    Ok(rows)
}

/// Re-verifies a finite distance certificate: the cover unions to the whole
/// domain and every witness re-verifies on its restriction.
pub fn verify_distance_certificate(
    f: &LipschitzMap,
    g: &LipschitzMap,
    result: &DistanceResult,
) -> bool {
    let DistanceResult::Finite { k, cover, witnesses } = result else {
        return true;
    };
    if cover.len() != k + 1 || witnesses.len() != k + 1 {
        return false;
    }
    let mut covered = vec![false; f.domain.len()];
    for subset in cover {
        if !same_space(&subset.space, &f.domain) {
            return false;
        }
        for &i in &subset.indices {
            covered[i] = true;
        }
    }
    if !covered.iter().all(|&c| c) {
        return false;
    }
    for (subset, witness) in cover.iter().zip(witnesses) {
        let (Ok(fu), Ok(gu)) = (restrict(f, subset), restrict(g, subset)) else {
            return false;
        };
        if !crate::homotopy::is_valid_homotopy(witness, &fu, &gu) {
            return false;
        }
    }
    true
}

/// Witness restriction used when a cached good superset answers for a
/// subset, exposed for reuse by the invariants module.
pub fn restrict_witness_to(
    witness: &Homotopy,
    sup: &PointSubset,
    sub: &PointSubset,
) -> Result<Homotopy, DistanceError> {
    let positions: Vec<usize> = sub
        .indices
        .iter()
        .map(|i| sup.indices.binary_search(i).expect("subset of superset"))
        .collect();
    let sup_domain = &witness.first().domain;
    let inner = PointSubset::new(sup_domain, positions)?;
    Ok(restrict_homotopy(witness, &inner)?)
}

pub use crate::search::DEFAULT_BUDGET;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use crate::space::{cycle_geodesic, FiniteMetricSpace};

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    fn params(sv: &str, rv: &str) -> ScaleParams {
        ScaleParams::new(s(sv), s(rv)).unwrap()
    }

    #[test]
    fn equal_maps_have_distance_zero() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let result = homotopic_distance(&f, &f, params("1", "1"), DEFAULT_BUDGET).unwrap();
        assert_eq!(result.finite_k(), Some(0));
        assert!(verify_distance_certificate(&f, &f, &result));
    }

    #[test]
    fn hexagon_identity_to_constant_needs_two_arcs() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let g = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        let result = homotopic_distance(&f, &g, params("1", "1"), DEFAULT_BUDGET).unwrap();
        assert_eq!(result.finite_k(), Some(1));
        assert!(verify_distance_certificate(&f, &g, &result));
    }

    #[test]
    fn disconnected_codomain_gives_infinity_with_the_bad_point() {
        let far = FiniteMetricSpace::build(
            "far",
            vec!["a".into(), "b".into()],
            vec![vec![s("0"), s("5")], vec![s("5"), s("0")]],
        )
        .unwrap();
        let dom = crate::space::interval(0);
        let f = LipschitzMap::constant(&dom, &far, 0).unwrap();
        let g = LipschitzMap::constant(&dom, &far, 1).unwrap();
        match homotopic_distance(&f, &g, params("1", "1"), DEFAULT_BUDGET).unwrap() {
            DistanceResult::Infinite { bad_point, .. } => assert_eq!(bad_point, 0),
            other => panic!("expected Infinite, got {other:?}"),
        }
    }

    #[test]
    fn scale_below_lipschitz_constant_is_rejected() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let g = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        assert!(matches!(
            homotopic_distance(&f, &g, params("1/2", "1"), DEFAULT_BUDGET),
            Err(DistanceError::ScaleTooSmall { .. })
        ));
    }

    #[test]
    fn sweep_is_a_staircase_on_the_hexagon() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let g = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        let rows = dr_sweep(&f, &g, s("1"), &[s("1"), s("2"), s("3")], DEFAULT_BUDGET).unwrap();
        let ks: Vec<Option<usize>> = rows.iter().map(|r| r.result.finite_k()).collect();
        assert_eq!(ks, vec![Some(1), Some(0), Some(0)]);
    }

    #[test]
    fn constant_pair_sweep_is_all_zeros() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::constant(&c6, &c6, 1).unwrap();
        let rows = dr_sweep(&f, &f, s("0"), &[s("1/2"), s("1"), s("2")], DEFAULT_BUDGET).unwrap();
        assert!(rows.iter().all(|r| r.result.finite_k() == Some(0)));
    }

    #[test]
    fn good_subsets_are_downward_closed_in_the_cache() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let g = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        let mut solver = DistanceSolver::new(&f, &g, params("1", "1"), DEFAULT_BUDGET).unwrap();
        // the arc {0,1,2,3} slides to a point, so it is good
        let arc = 0b1111u64;
        assert!(matches!(
            solver.is_good_subset(arc).unwrap(),
            SubsetVerdict::Good(_)
        ));
        // its subset comes back good from the cache with a valid witness
        let sub = 0b0110u64;
        match solver.is_good_subset(sub).unwrap() {
            SubsetVerdict::Good(h) => {
                let subset = solver.subset_of(sub);
                let fu = restrict(&f, &subset).unwrap();
                let gu = restrict(&g, &subset).unwrap();
                assert!(crate::homotopy::is_valid_homotopy(&h, &fu, &gu));
            }
            other => panic!("expected Good, got {other:?}"),
        }
    }

    #[test]
    fn min_cover_finds_exact_optimum() {
        // universe {0..5}, optimal cover is the two halves even though the
        // greedy order might prefer the big middle set
        let universe = 0b111111u64;
        let sets = [0b000111u64, 0b111000u64, 0b011110u64, 0b000001u64];
        let cover = min_cover(universe, &sets).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(min_cover(0b1111u64, &[0b0011u64]).is_none());
    }
}
