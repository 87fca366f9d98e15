//! Reachability in the implicit frame graph.
//!
//! Nodes are s-Lipschitz maps U -> Y; two maps are adjacent when every point
//! moves by at most r. A discrete homotopy from f to g is exactly a path, so
//! deciding homotopy is bidirectional breadth-first search. Neighbor
//! generation assigns images point by point in lexicographic order with
//! incremental Lipschitz pruning, which keeps witnesses reproducible.

use std::collections::HashMap;

use thiserror::Error;

use crate::homotopy::Homotopy;
use crate::maps::{LipschitzMap, LipschitzViolation, MapError, ScaleParams};
use crate::scalar::Scalar;
use crate::space::{same_space, SpaceRef};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("maps must share domain and codomain")]
    SpaceMismatch,
    #[error("{which} map is not s-Lipschitz for s = {s}: pair ({x1},{x2}) has image gap {gap} > {allowed}")]
    NotLipschitz {
        which: &'static str,
        s: Scalar,
        x1: usize,
        x2: usize,
        gap: Scalar,
        allowed: Scalar,
    },
    #[error("no target maps given")]
    NoTargets,
    #[error(transparent)]
    Map(#[from] MapError),
}

fn lipschitz_precondition(
    which: &'static str,
    map: &LipschitzMap,
    s: Scalar,
) -> Result<(), SearchError> {
    map.is_s_lipschitz(s)
        .map_err(|LipschitzViolation { x1, x2, image_gap, allowed }| SearchError::NotLipschitz {
            which,
            s,
            x1,
            x2,
            gap: image_gap,
            allowed,
        })
}

/// Outcome of a frame-graph search. `NotHomotopic` is only reported after a
/// full reachable set was exhausted within budget; a truncated search is
/// `BudgetExceeded`.
#[derive(Debug)]
pub enum HomotopyVerdict {
    Found(Homotopy),
    NotHomotopic { explored: usize },
    BudgetExceeded { visited: usize },
}

impl HomotopyVerdict {
    pub fn found(&self) -> Option<&Homotopy> {
        match self {
            HomotopyVerdict::Found(h) => Some(h),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, HomotopyVerdict::Found(_))
    }
}

// ---------------------------------------------------------------------------
// Compiled constraints
// ---------------------------------------------------------------------------

/// All threshold comparisons are resolved once into bitmasks over the
/// codomain, so the search itself is pure bit arithmetic.
struct Compiled {
    n: usize,
    q: usize,
    words: usize,
    /// step[y] = { y' : d(y, y') <= r }, row-major `words` u64 per y.
    step: Vec<u64>,
    /// For the k-th distinct domain distance, allow[k][v] = { y : d(y, v) <= s * delta_k }.
    allow: Vec<u64>,
    /// dist_class[i * n + j] = k such that d_dom(i, j) = delta_k.
    dist_class: Vec<usize>,
}

impl Compiled {
    fn build(domain: &SpaceRef, codomain: &SpaceRef, params: ScaleParams) -> Compiled {
        let n = domain.len();
        let q = codomain.len();
        let words = q.div_ceil(64);

        let mut step = vec![0u64; q * words];
        for y in 0..q {
            for y2 in 0..q {
                if codomain.d(y, y2) <= params.r {
                    step[y * words + y2 / 64] |= 1 << (y2 % 64);
                }
            }
        }

        let mut deltas: Vec<Scalar> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let d = domain.d(i, j);
                if !deltas.contains(&d) {
                    deltas.push(d);
                }
            }
        }
        deltas.sort();
        let mut dist_class = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                dist_class[i * n + j] =
                    deltas.iter().position(|&d| d == domain.d(i, j)).unwrap();
            }
        }
        let n_classes = deltas.len();
        let mut allow = vec![0u64; n_classes * q * words];
        for (k, &delta) in deltas.iter().enumerate() {
            let bound = params.s * delta;
            for v in 0..q {
                let row = (k * q + v) * words;
                for y in 0..q {
                    if codomain.d(y, v) <= bound {
                        allow[row + y / 64] |= 1 << (y % 64);
                    }
                }
            }
        }
        Compiled {
            n,
            q,
            words,
            step,
            allow,
            dist_class,
        }
    }

    #[inline]
    fn step_row(&self, y: usize) -> &[u64] {
        &self.step[y * self.words..(y + 1) * self.words]
    }

    #[inline]
    fn allow_row(&self, class: usize, v: usize) -> &[u64] {
        let row = (class * self.q + v) * self.words;
        &self.allow[row..row + self.words]
    }

    /// Emits neighbors of `frame` in lexicographic order. Returns false when
    /// the work budget ran out mid-expansion. The visitor returns false to
    /// stop early (used when the search only needs the first hit).
    fn for_each_neighbor(
        &self,
        frame: &[u16],
        work: &mut u64,
        work_limit: u64,
        mut visit: impl FnMut(&[u16]) -> bool,
    ) -> Option<bool> {
        let n = self.n;
        let words = self.words;
        // avail[d] holds the candidate mask for point d given choices < d
        let mut avail = vec![0u64; n * words];
        let mut cursor = vec![0usize; n]; // next bit index to try at each depth
        let mut chosen = vec![0u16; n];
        let mut depth = 0usize;

        // seed depth 0
        avail[..words].copy_from_slice(self.step_row(frame[0] as usize));
        cursor[0] = 0;

        loop {
            *work += 1;
            if *work > work_limit {
                return None;
            }
            // find next set bit at `depth` starting from cursor[depth]
            let base = depth * words;
            let mut next: Option<usize> = None;
            let mut bit = cursor[depth];
            while bit < self.q {
                let w = avail[base + bit / 64] >> (bit % 64);
                if w == 0 {
                    bit = (bit / 64 + 1) * 64;
                    continue;
                }
                let tz = w.trailing_zeros() as usize;
                next = Some(bit + tz);
                break;
            }
            match next {
                None => {
                    // exhausted this depth; backtrack
                    if depth == 0 {
                        return Some(true);
                    }
                    depth -= 1;
                }
                Some(y) => {
                    cursor[depth] = y + 1;
                    chosen[depth] = y as u16;
                    if depth + 1 == n {
                        if !visit(&chosen) {
                            return Some(false);
                        }
                    } else {
                        // push next depth: step constraint AND pair constraints
                        let d2 = depth + 1;
                        let nbase = d2 * words;
                        let (head, tail) = avail.split_at_mut(nbase);
                        let dest = &mut tail[..words];
                        let _ = head;
                        dest.copy_from_slice(self.step_row(frame[d2] as usize));
                        for j in 0..d2 {
                            let class = self.dist_class[d2 * n + j];
                            let row = self.allow_row(class, chosen[j] as usize);
                            let mut all_zero = true;
                            for w in 0..words {
                                dest[w] &= row[w];
                                all_zero &= dest[w] == 0;
                            }
                            if all_zero {
                                break;
                            }
                        }
                        cursor[d2] = 0;
                        depth = d2;
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Bidirectional BFS
// ---------------------------------------------------------------------------

struct Side {
    index: HashMap<Box<[u16]>, u32>,
    nodes: Vec<Box<[u16]>>,
    parent: Vec<u32>,
    dist: Vec<u32>,
    frontier: Vec<u32>,
    depth: u32,
}

impl Side {
    fn new() -> Side {
        Side {
            index: HashMap::new(),
            nodes: Vec::new(),
            parent: Vec::new(),
            dist: Vec::new(),
            frontier: Vec::new(),
            depth: 0,
        }
    }

    fn seed(&mut self, node: Box<[u16]>) -> u32 {
        let id = self.nodes.len() as u32;
        match self.index.entry(node.clone()) {
            std::collections::hash_map::Entry::Occupied(e) => *e.get(),
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(id);
                self.nodes.push(node);
                self.parent.push(id);
                self.dist.push(0);
                self.frontier.push(id);
                id
            }
        }
    }

    fn chain_to_root(&self, from: u32) -> Vec<u32> {
        let mut chain = vec![from];
        let mut at = from;
        while self.parent[at as usize] != at {
            at = self.parent[at as usize];
            chain.push(at);
        }
        chain
    }
}

fn frame_of(map: &LipschitzMap) -> Box<[u16]> {
    map.values().iter().map(|&v| v as u16).collect()
}

fn map_of(frame: &[u16], domain: &SpaceRef, codomain: &SpaceRef) -> LipschitzMap {
    LipschitzMap::new(
        domain,
        codomain,
        frame.iter().map(|&v| v as usize).collect(),
    )
    .expect("frames generated in range")
}

/// Shortest discrete homotopy from f to g, or a proof there is none, or a
/// budget report. The budget bounds total search work (stored frames plus
/// generated candidates).
pub fn find_homotopy(
    f: &LipschitzMap,
    g: &LipschitzMap,
    params: ScaleParams,
    budget: u64,
) -> Result<HomotopyVerdict, SearchError> {
    find_homotopy_to_any(f, std::slice::from_ref(g), params, budget)
}

/// Same as [`find_homotopy`] but accepts several goal maps and returns a
/// shortest homotopy to the nearest one. Used for "homotopic to some
/// constant" style questions.
pub fn find_homotopy_to_any(
    f: &LipschitzMap,
    targets: &[LipschitzMap],
    params: ScaleParams,
    budget: u64,
) -> Result<HomotopyVerdict, SearchError> {
    if targets.is_empty() {
        return Err(SearchError::NoTargets);
    }
    for t in targets {
        if !same_space(&f.domain, &t.domain) || !same_space(&f.codomain, &t.codomain) {
            return Err(SearchError::SpaceMismatch);
        }
    }
    lipschitz_precondition("first", f, params.s)?;
    for t in targets {
        lipschitz_precondition("target", t, params.s)?;
    }

    let domain = &f.domain;
    let codomain = &f.codomain;

    let make = |frame: &[u16]| map_of(frame, domain, codomain);
    let finish = |frames: Vec<LipschitzMap>| {
        Ok(HomotopyVerdict::Found(Homotopy { frames, params }))
    };

    // zero-length homotopy
    if targets.iter().any(|t| t.values() == f.values()) {
        return finish(vec![f.clone()]);
    }

    let compiled = Compiled::build(domain, codomain, params);
    let mut work: u64 = 0;

    let mut side_a = Side::new();
    side_a.seed(frame_of(f));
    let mut side_b = Side::new();
    for t in targets {
        side_b.seed(frame_of(t));
    }

    // (total length, arena id on A, arena id on B) of the best meet so far
    let mut best: Option<(u32, u32, u32)> = None;

    loop {
        if let Some((total, a_id, b_id)) = best {
            if total <= side_a.depth + side_b.depth + 1 {
                // No undiscovered path can be shorter: a path of length
                // below `total` would have been met by the completed layers.
                let mut a_chain = side_a.chain_to_root(a_id); // meet .. f
                a_chain.reverse(); // f .. meet
                let b_chain = side_b.chain_to_root(b_id); // meet .. target
                let mut frames: Vec<LipschitzMap> = a_chain
                    .iter()
                    .map(|&id| make(&side_a.nodes[id as usize]))
                    .collect();
                frames.extend(
                    b_chain
                        .iter()
                        .skip(1)
                        .map(|&id| make(&side_b.nodes[id as usize])),
                );
                return finish(frames);
            }
        }

        // pick the smaller pending frontier; exhaustion of either side is a
        // completeness proof for the component it explored
        let expand_a = match (side_a.frontier.is_empty(), side_b.frontier.is_empty()) {
            (true, _) | (_, true) => {
                return Ok(match best {
                    Some(_) => unreachable!("a meet satisfies the stop bound once a side empties"),
                    None => {
                        let explored = if side_a.frontier.is_empty() {
                            side_a.nodes.len()
                        } else {
                            side_b.nodes.len()
                        };
                        HomotopyVerdict::NotHomotopic { explored }
                    }
                });
            }
            _ => side_a.frontier.len() <= side_b.frontier.len(),
        };

        let (this, other) = if expand_a {
            (&mut side_a, &mut side_b)
        } else {
            (&mut side_b, &mut side_a)
        };

        let frontier = std::mem::take(&mut this.frontier);
        let next_depth = this.depth + 1;
        let mut aborted = false;
        'expand: for &u in &frontier {
            let u_frame = this.nodes[u as usize].clone();
            let result = compiled.for_each_neighbor(&u_frame, &mut work, budget, |nb| {
                if !this.index.contains_key(nb) {
                    let id = this.nodes.len() as u32;
                    let key: Box<[u16]> = nb.into();
                    this.index.insert(key.clone(), id);
                    this.nodes.push(key);
                    this.parent.push(u);
                    this.dist.push(next_depth);
                    this.frontier.push(id);
                    if let Some(&other_id) = other.index.get(nb) {
                        let total = next_depth + other.dist[other_id as usize];
                        let better = match best {
                            None => true,
                            Some((t, _, _)) => total < t,
                        };
                        if better {
                            best = Some(if expand_a {
                                (total, id, other_id)
                            } else {
                                (total, other_id, id)
                            });
                        }
                    }
                }
                true
            });
            match result {
                None => {
                    aborted = true;
                    break 'expand;
                }
                Some(_) => {}
            }
        }
        if aborted {
            return Ok(HomotopyVerdict::BudgetExceeded {
                visited: side_a.nodes.len() + side_b.nodes.len(),
            });
        }
        this.depth = next_depth;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::is_valid_homotopy;
    use crate::scalar::parse_scalar;
    use crate::space::cycle_geodesic;

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    fn params(sv: &str, rv: &str) -> ScaleParams {
        ScaleParams::new(s(sv), s(rv)).unwrap()
    }

    #[test]
    fn equal_maps_have_zero_length_witness() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::identity(&c6);
        let verdict = find_homotopy(&f, &f, params("1", "1"), DEFAULT_BUDGET).unwrap();
        let h = verdict.found().expect("found");
        assert_eq!(h.length(), 0);
    }

    #[test]
    fn hexagon_identity_is_not_one_contractible() {
        let c6 = cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let c0 = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        match find_homotopy(&id, &c0, params("1", "1"), DEFAULT_BUDGET).unwrap() {
            HomotopyVerdict::NotHomotopic { explored } => assert!(explored > 0),
            other => panic!("expected NotHomotopic, got {other:?}"),
        }
    }

    #[test]
    fn hexagon_contracts_with_step_two() {
        let c6 = cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let c0 = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        let verdict = find_homotopy(&id, &c0, params("1", "2"), DEFAULT_BUDGET).unwrap();
        let h = verdict.found().expect("found");
        assert!(h.length() <= 4, "witness length {}", h.length());
        assert!(is_valid_homotopy(h, &id, &c0));
    }

    #[test]
    fn budget_exhaustion_reports_honestly() {
        let c6 = cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let c0 = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        match find_homotopy(&id, &c0, params("1", "1"), 10).unwrap() {
            HomotopyVerdict::BudgetExceeded { .. } => {}
            other => panic!("expected BudgetExceeded, got {other:?}"),
        }
    }

    #[test]
    fn non_lipschitz_input_is_an_error_not_a_verdict() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::new(&c6, &c6, vec![0, 3, 0, 3, 0, 3]).unwrap();
        let g = LipschitzMap::constant(&c6, &c6, 0).unwrap();
        assert!(find_homotopy(&f, &g, params("1", "1"), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn multi_target_returns_nearest_constant() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::constant(&c6, &c6, 2).unwrap();
        let targets: Vec<LipschitzMap> = (0..6)
            .map(|y| LipschitzMap::constant(&c6, &c6, y).unwrap())
            .collect();
        let verdict = find_homotopy_to_any(&f, &targets, params("1", "1"), DEFAULT_BUDGET).unwrap();
        assert_eq!(verdict.found().expect("found").length(), 0);
    }

    #[test]
    fn symmetry_of_the_verdict() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::new(&c6, &c6, vec![0, 1, 2, 2, 1, 0]).unwrap();
        let g = LipschitzMap::new(&c6, &c6, vec![3, 3, 4, 4, 3, 3]).unwrap();
        for r in ["1", "2"] {
            let p = params("1", r);
            let fg = find_homotopy(&f, &g, p, DEFAULT_BUDGET).unwrap();
            let gf = find_homotopy(&g, &f, p, DEFAULT_BUDGET).unwrap();
            assert_eq!(fg.is_found(), gf.is_found());
            if let (Some(a), Some(b)) = (fg.found(), gf.found()) {
                assert_eq!(a.length(), b.length());
            }
        }
    }
}
