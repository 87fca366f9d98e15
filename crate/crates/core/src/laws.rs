//! Executable law suite: every inequality and equality satisfied by the
//! distance and the derived invariants, checked on seeded pseudo-random
//! small instances with exact arithmetic.
//!
//! A law that constructs a homotopy verifies the construction directly; a
//! law that compares distances computes both sides independently. Any
//! counterexample is a bug in this crate, and the suite exists to find it.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distance::{homotopic_distance, DistanceError, DistanceResult};
use crate::homotopy::{concatenate, is_valid_homotopy, verify_homotopy, Homotopy};
use crate::invariants::{
    cat_space, motion_plan_from_witness, tc_product, verify_motion_plan, InvariantMethod,
};
use crate::maps::{axis1, axis2, compose, projection1, projection2, LipschitzMap, ScaleParams};
use crate::scalar::{parse_scalar, Scalar};
use crate::search::{find_homotopy, find_homotopy_to_any, HomotopyVerdict};
use crate::space::{
    cycle_geodesic, interval, is_r_connected, min_plus_closure, product_l1, FiniteMetricSpace,
    PointSubset, ProductMetric, SpaceRef,
};

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct SizeCaps {
    pub max_x: usize,
    pub max_y: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps { max_x: 5, max_y: 6 }
    }
}

fn palette() -> Vec<Scalar> {
    ["1/2", "1", "3/2", "2", "5/2", "3"]
        .iter()
        .map(|t| parse_scalar(t).unwrap())
        .collect()
}

/// Random space: sometimes an interval or cycle, otherwise a random
/// symmetric positive matrix repaired into a metric by min-plus closure.
pub fn random_space(rng: &mut ChaCha8Rng, max_n: usize, tag: &str) -> SpaceRef {
    let n = rng.gen_range(2..=max_n.max(2));
    match rng.gen_range(0..4u8) {
        0 => interval(n - 1),
        1 => cycle_geodesic(n.max(3)).expect("n >= 3"),
        _ => {
            let palette = palette();
            let mut dist = vec![Scalar::zero(); n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = palette[rng.gen_range(0..palette.len())];
                    dist[i * n + j] = v;
                    dist[j * n + i] = v;
                }
            }
            min_plus_closure(n, &mut dist);
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            let matrix = (0..n)
                .map(|i| (0..n).map(|j| dist[i * n + j]).collect())
                .collect();
            FiniteMetricSpace::build(format!("random-{tag}"), labels, matrix)
                .expect("closure repairs the triangle inequality")
        }
    }
}

pub fn random_map(rng: &mut ChaCha8Rng, dom: &SpaceRef, cod: &SpaceRef) -> LipschitzMap {
    let values = (0..dom.len()).map(|_| rng.gen_range(0..cod.len())).collect();
    LipschitzMap::new(dom, cod, values).expect("values in range")
}

/// An r drawn from the codomain's own distance scale so thresholds are
/// exercised on both sides.
pub fn random_r(rng: &mut ChaCha8Rng, space: &SpaceRef) -> Scalar {
    let half = parse_scalar("1/2").unwrap();
    let mut values: Vec<Scalar> = Vec::new();
    for i in 0..space.len() {
        for j in (i + 1)..space.len() {
            let d = space.d(i, j);
            for v in [d, d * half] {
                if !values.contains(&v) {
                    values.push(v);
                }
            }
        }
    }
    if values.is_empty() {
        return Scalar::one();
    }
    values.sort();
    values[rng.gen_range(0..values.len())]
}

/// Smallest pairwise distance at which the space is one r-component.
pub fn connectivity_threshold(space: &SpaceRef) -> Scalar {
    let mut values: Vec<Scalar> = Vec::new();
    for i in 0..space.len() {
        for j in (i + 1)..space.len() {
            let d = space.d(i, j);
            if !values.contains(&d) {
                values.push(d);
            }
        }
    }
    values.sort();
    for v in &values {
        if is_r_connected(space, *v).0 {
            return *v;
        }
    }
    values.last().copied().unwrap_or_else(Scalar::one)
}

/// A full random instance: two spaces, two maps, a scale pair.
#[derive(Clone)]
pub struct Instance {
    pub x: SpaceRef,
    pub y: SpaceRef,
    pub f: LipschitzMap,
    pub g: LipschitzMap,
    pub params: ScaleParams,
}

pub fn generate_instance(seed: u64, caps: SizeCaps) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_space(&mut rng, caps.max_x, "dom");
    let y = random_space(&mut rng, caps.max_y, "cod");
    let f = random_map(&mut rng, &x, &y);
    let g = random_map(&mut rng, &x, &y);
    let s = f.lipschitz_constant().max(g.lipschitz_constant());
    let r = random_r(&mut rng, &y);
    Instance {
        x,
        y,
        f,
        g,
        params: ScaleParams::new(s, r).expect("nonnegative"),
    }
}

/// FNV-1a over a canonical rendering; used to pin down reproducibility.
pub fn instance_digest(instance: &Instance) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |s: &str| {
        for b in s.bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    for space in [&instance.x, &instance.y] {
        for i in 0..space.len() {
            eat(space.label(i));
            for j in 0..space.len() {
                eat(&space.d(i, j).to_string());
            }
        }
    }
    for v in instance.f.values() {
        eat(&v.to_string());
    }
    for v in instance.g.values() {
        eat(&v.to_string());
    }
    eat(&instance.params.s.to_string());
    eat(&instance.params.r.to_string());
    hash
}

/// Random walk in the frame graph starting at `start`: each step proposes
/// per-point moves within the step radius and keeps the frame only if it
/// stays s-Lipschitz. The walk itself is the homotopy witness.
pub fn random_walk(
    start: &LipschitzMap,
    params: ScaleParams,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Homotopy {
    debug_assert!(start.is_s_lipschitz(params.s).is_ok());
    let cod = &start.codomain;
    let q = cod.len();
    let mut frames = vec![start.clone()];
    for _ in 0..steps {
        let current = frames.last().unwrap().clone();
        let mut accepted = None;
        for _attempt in 0..8 {
            let values: Vec<usize> = current
                .values()
                .iter()
                .map(|&v| {
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        let ball: Vec<usize> =
                            (0..q).filter(|&y| cod.d(v, y) <= params.r).collect();
                        ball[rng.gen_range(0..ball.len())]
                    }
                })
                .collect();
            let candidate =
                LipschitzMap::new(&current.domain, cod, values).expect("values in range");
            if candidate.is_s_lipschitz(params.s).is_ok() {
                accepted = Some(candidate);
                break;
            }
        }
        frames.push(accepted.unwrap_or(current));
    }
    Homotopy { frames, params }
}

// ---------------------------------------------------------------------------
// Inverse searches
// ---------------------------------------------------------------------------

/// Brute-force search for a left homotopy inverse: a map back with Lipschitz
/// constant within `lip_bound` whose composite with `alpha` deforms to the
/// identity at scales (1, r). Candidates are enumerated lexicographically,
/// so the result is deterministic.
pub fn find_homotopy_inverse(
    alpha: &LipschitzMap,
    r: Scalar,
    lip_bound: Scalar,
    budget: u64,
) -> Result<Option<LipschitzMap>, DistanceError> {
    let y = &alpha.domain;
    let y2 = &alpha.codomain;
    let id = LipschitzMap::identity(y);
    let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
    let n = y2.len();
    let total = (y.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    assert!(total <= 1 << 20, "inverse search is for small spaces");
    let mut values = vec![0usize; n];
    loop {
        let beta = LipschitzMap::new(y2, y, values.clone()).expect("in range");
        if beta.lipschitz_constant() <= lip_bound {
            let composite = compose(&beta, alpha).expect("chain");
            if composite.is_s_lipschitz(Scalar::one()).is_ok() {
                if let HomotopyVerdict::Found(_) = find_homotopy(&composite, &id, params, budget)? {
                    return Ok(Some(beta));
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(None);
            }
            values[k] += 1;
            if values[k] < y.len() {
                break;
            }
            values[k] = 0;
            k += 1;
        }
    }
}

/// Exact section: eta with beta(eta(x)) = x for all x and Lip(eta) within
/// the bound, found by backtracking over preimages.
pub fn find_strict_section(beta: &LipschitzMap, lip_bound: Scalar) -> Option<LipschitzMap> {
    let x = &beta.codomain;
    let x2 = &beta.domain;
    let preimages: Vec<Vec<usize>> = (0..x.len())
        .map(|t| (0..x2.len()).filter(|&z| beta.apply(z) == t).collect())
        .collect();
    if preimages.iter().any(|p| p.is_empty()) {
        return None;
    }
    fn descend(
        depth: usize,
        chosen: &mut Vec<usize>,
        preimages: &[Vec<usize>],
        x: &SpaceRef,
        x2: &SpaceRef,
        lip_bound: Scalar,
    ) -> bool {
        if depth == preimages.len() {
            return true;
        }
        'candidates: for &candidate in &preimages[depth] {
            for (earlier, &val) in chosen.iter().enumerate() {
                if x2.d(candidate, val) > lip_bound * x.d(depth, earlier) {
                    continue 'candidates;
                }
            }
            chosen.push(candidate);
            if descend(depth + 1, chosen, preimages, x, x2, lip_bound) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if descend(0, &mut chosen, &preimages, x, x2, lip_bound) {
        Some(LipschitzMap::new(x, x2, chosen).expect("in range"))
    } else {
        None
    }
}

/// Isometric relabeled copy of a space together with the isometry onto it.
fn isometric_copy(space: &SpaceRef, rng: &mut ChaCha8Rng, tag: &str) -> (SpaceRef, LipschitzMap) {
    let n = space.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let labels: Vec<String> = (0..n).map(|i| format!("{tag}{i}")).collect();
    let mut matrix = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            matrix[perm[i]][perm[j]] = space.d(i, j);
        }
    }
    let copy = FiniteMetricSpace::build(format!("iso-{tag}"), labels, matrix)
        .expect("isometric image of a metric");
    let alpha = LipschitzMap::new(space, &copy, perm).expect("bijection");
    (copy, alpha)
}

fn inverse_of_isometry(copy: &SpaceRef, base: &SpaceRef, iso: &LipschitzMap) -> LipschitzMap {
    let mut inv = vec![0usize; copy.len()];
    for (i, &v) in iso.values().iter().enumerate() {
        inv[v] = i;
    }
    LipschitzMap::new(copy, base, inv).expect("bijection")
}

// ---------------------------------------------------------------------------
// The law registry
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum LawStatus {
    Passed,
    Skipped(String),
    Violated(String),
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Counterexample {
    pub law: String,
    pub trial: u32,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LawRow {
    pub law: String,
    pub trials: u32,
    pub passed: u32,
    pub skipped: u32,
    pub violations: Vec<Counterexample>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LawReport {
    pub seed: u64,
    pub trials: u32,
    pub rows: Vec<LawRow>,
}

impl LawReport {
    pub fn total_violations(&self) -> usize {
        self.rows.iter().map(|r| r.violations.len()).sum()
    }

    /// Laws whose pass count fell below the floor; a nonempty answer means a
    /// hypothesis filter is too tight for the trial count.
    pub fn underexercised(&self, min_passed: u32) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| r.passed < min_passed)
            .map(|r| r.law.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LawConfig {
    pub trials: u32,
    pub seed: u64,
    pub budget: u64,
    pub workers: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            trials: 200,
            seed: 0,
            budget: crate::search::DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

type LawFn = fn(&mut ChaCha8Rng, u64) -> LawStatus;

pub struct Law {
    pub id: &'static str,
    pub statement: &'static str,
    run: LawFn,
}

pub fn law_registry() -> Vec<Law> {
    vec![
        Law {
            id: "zero-iff-homotopic",
            statement: "distance is zero exactly when the maps are homotopic",
            run: law_zero_iff_homotopic,
        },
        Law {
            id: "distance-symmetry",
            statement: "distance is symmetric in its two maps",
            run: law_distance_symmetry,
        },
        Law {
            id: "replacement-invariance",
            statement: "replacing either map by a homotopic one preserves the distance",
            run: law_replacement_invariance,
        },
        Law {
            id: "step-monotonicity",
            statement: "larger step bounds never increase the distance",
            run: law_step_monotonicity,
        },
        Law {
            id: "concatenation",
            statement: "witnesses glue end to end with added lengths",
            run: law_concatenation,
        },
        Law {
            id: "post-compose-homotopy",
            statement: "composing a homotopy with an outer map rescales both bounds",
            run: law_post_compose_homotopy,
        },
        Law {
            id: "pre-compose-homotopy",
            statement: "precomposing a homotopy keeps the step bound",
            run: law_pre_compose_homotopy,
        },
        Law {
            id: "post-composition-bound",
            statement: "distance after an outer map is bounded by the original distance",
            run: law_post_composition_bound,
        },
        Law {
            id: "pre-composition-bound",
            statement: "distance after an inner map is bounded by the original distance",
            run: law_pre_composition_bound,
        },
        Law {
            id: "cat-map-le-cat-domain",
            statement: "cat of a contractive map is at most cat of its domain",
            run: law_cat_map_le_cat_domain,
        },
        Law {
            id: "cat-le-tc",
            statement: "cat of a connected space is at most its TC",
            run: law_cat_le_tc,
        },
        Law {
            id: "cat-map-le-cat-codomain",
            statement: "cat of a map is at most cat of a connected codomain",
            run: law_cat_map_le_cat_codomain,
        },
        Law {
            id: "distance-le-cat-product",
            statement: "distance is bounded by the product of the two map categories",
            run: law_distance_le_cat_product,
        },
        Law {
            id: "mixed-composition-bound",
            statement: "composing homotopic maps with two inner maps costs one extra step factor",
            run: law_mixed_composition_bound,
        },
        Law {
            id: "mixed-composition-bound-contractive",
            statement: "with a contractive outer pair the step bound survives unchanged",
            run: law_mixed_composition_contractive,
        },
        Law {
            id: "left-inverse-invariance",
            statement: "an outer map with a left homotopy inverse preserves distance up to its scale",
            run: law_left_inverse_invariance,
        },
        Law {
            id: "right-inverse-invariance",
            statement: "an inner map with a right inverse section preserves distance",
            run: law_right_inverse_invariance,
        },
        Law {
            id: "conjugation-invariance",
            statement: "conjugating both maps by inverse-equipped unit maps preserves distance",
            run: law_conjugation_invariance,
        },
        Law {
            id: "cat-distance-chain",
            statement: "cat equals the distance from the identity to a constant and to/between the axis inclusions",
            run: law_cat_distance_chain,
        },
        Law {
            id: "cat-map-as-distance",
            statement: "cat of a map equals its distance to a fixed constant on connected codomains",
            run: law_cat_map_as_distance,
        },
        Law {
            id: "tc-as-projection-distance",
            statement: "TC certificates convert to motion-planning sections and back",
            run: law_tc_sections,
        },
    ]
}

pub fn law_ids() -> Vec<&'static str> {
    law_registry().iter().map(|l| l.id).collect()
}

fn trial_seed(cfg_seed: u64, law_index: usize, trial: u32) -> u64 {
    cfg_seed
        ^ (law_index as u64 + 1).wrapping_mul(0x9e3779b97f4a7c15)
        ^ (trial as u64 + 1).wrapping_mul(0xd1b54a32d192ed03)
}

/// Runs one law trial exactly as the suite would; counterexamples replay by
/// (law, seed, trial).
pub fn run_single(law_id: &str, cfg: LawConfig, trial: u32) -> Option<LawStatus> {
    let registry = law_registry();
    let (index, law) = registry.iter().enumerate().find(|(_, l)| l.id == law_id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, index, trial));
    Some((law.run)(&mut rng, cfg.budget))
}

pub fn run_suite(only: Option<&[String]>, cfg: LawConfig) -> LawReport {
    let registry = law_registry();
    let selected: Vec<(usize, &Law)> = registry
        .iter()
        .enumerate()
        .filter(|(_, law)| only.is_none_or(|ids| ids.iter().any(|i| i == law.id)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .expect("thread pool");

    let rows = pool.install(|| {
        selected
            .iter()
            .map(|(index, law)| {
                let outcomes: Vec<LawStatus> = (0..cfg.trials)
                    .into_par_iter()
                    .map(|trial| {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, *index, trial));
                        (law.run)(&mut rng, cfg.budget)
                    })
                    .collect();
                let mut row = LawRow {
                    law: law.id.to_string(),
                    trials: cfg.trials,
                    passed: 0,
                    skipped: 0,
                    violations: Vec::new(),
                };
                for (trial, outcome) in outcomes.into_iter().enumerate() {
                    match outcome {
                        LawStatus::Passed => row.passed += 1,
                        LawStatus::Skipped(_) => row.skipped += 1,
                        LawStatus::Violated(detail) => row.violations.push(Counterexample {
                            law: law.id.to_string(),
                            trial: trial as u32,
                            seed: trial_seed(cfg.seed, *index, trial as u32),
                            detail,
                        }),
                    }
                }
                row
            })
            .collect()
    });
    LawReport {
        seed: cfg.seed,
        trials: cfg.trials,
        rows,
    }
}

// ---------------------------------------------------------------------------
// Shared helpers for the checks
// ---------------------------------------------------------------------------

/// Distance collapsed to an extended natural: None is infinity.
fn dval(result: &DistanceResult) -> Result<Option<usize>, String> {
    match result {
        DistanceResult::Finite { k, .. } => Ok(Some(*k)),
        DistanceResult::Infinite { .. } => Ok(None),
        DistanceResult::Bounded { note, .. } => Err(format!("undecided: {note}")),
    }
}

fn le(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn distance_at(
    f: &LipschitzMap,
    g: &LipschitzMap,
    s: Scalar,
    r: Scalar,
    budget: u64,
) -> Result<Option<usize>, String> {
    let params = ScaleParams::new(s, r).map_err(|e| e.to_string())?;
    let result = homotopic_distance(f, g, params, budget).map_err(|e| e.to_string())?;
    dval(&result)
}

/// cat of a map at an explicit frame scale: minimal cover on which the
/// restriction deforms to some constant at (s, r).
fn cat_map_value(
    f: &LipschitzMap,
    s: Scalar,
    r: Scalar,
    budget: u64,
) -> Result<Option<usize>, String> {
    let params = ScaleParams::new(s, r).map_err(|e| e.to_string())?;
    let outcome = crate::cover::minimal_cover_by(f.domain.len(), |mask| {
        let subset =
            PointSubset::new(&f.domain, (0..64).filter(|i| mask >> i & 1 == 1).collect())?;
        let fu = crate::maps::restrict(f, &subset)?;
        let targets: Vec<LipschitzMap> = (0..f.codomain.len())
            .map(|y| LipschitzMap::constant(&fu.domain, &f.codomain, y).expect("in range"))
            .collect();
        Ok(match find_homotopy_to_any(&fu, &targets, params, budget)? {
            HomotopyVerdict::Found(h) => crate::distance::SubsetVerdict::Good(h),
            HomotopyVerdict::NotHomotopic { explored } => {
                crate::distance::SubsetVerdict::Bad { explored }
            }
            HomotopyVerdict::BudgetExceeded { visited } => {
                crate::distance::SubsetVerdict::Unknown { visited }
            }
        })
    })
    .map_err(|e| e.to_string())?;
    match outcome {
        crate::cover::CoverOutcome::Exact { sets, .. } => Ok(Some(sets.len() - 1)),
        crate::cover::CoverOutcome::Truncated { note, .. } => Err(format!("undecided: {note}")),
    }
}

fn cat_space_value(space: &SpaceRef, r: Scalar, budget: u64) -> Result<Option<usize>, String> {
    let result =
        cat_space(space, r, budget, InvariantMethod::ByDefinition).map_err(|e| e.to_string())?;
    dval(&result.value)
}

fn violation(msg: impl Into<String>) -> LawStatus {
    LawStatus::Violated(msg.into())
}

macro_rules! try_law {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(msg) => return LawStatus::Violated(msg),
        }
    };
}

// ---------------------------------------------------------------------------
// The checks
// ---------------------------------------------------------------------------

fn law_zero_iff_homotopic(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 5 });
    let d = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let search = match find_homotopy(&inst.f, &inst.g, inst.params, budget) {
        Ok(v) => v,
        Err(e) => return violation(e.to_string()),
    };
    let found = search.is_found();
    if (d == Some(0)) == found {
        LawStatus::Passed
    } else {
        violation(format!("distance {d:?} but search found = {found}"))
    }
}

fn law_distance_symmetry(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 5 });
    let a = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let b = try_law!(distance_at(
        &inst.g,
        &inst.f,
        inst.params.s,
        inst.params.r,
        budget
    ));
    if a == b {
        LawStatus::Passed
    } else {
        violation(format!("{a:?} vs {b:?} after swapping the maps"))
    }
}

fn law_replacement_invariance(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 5 });
    let f2 = random_walk(&inst.f, inst.params, 3, rng).last().clone();
    let g2 = random_walk(&inst.g, inst.params, 3, rng).last().clone();
    let a = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let b = try_law!(distance_at(&f2, &g2, inst.params.s, inst.params.r, budget));
    if a == b {
        LawStatus::Passed
    } else {
        violation(format!(
            "distance changed from {a:?} to {b:?} after homotopic replacement"
        ))
    }
}

fn law_step_monotonicity(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 5 });
    let r1 = inst.params.r;
    let factor =
        [parse_scalar("3/2").unwrap(), parse_scalar("2").unwrap()][rng.gen_range(0..2usize)];
    let r2 = r1 * factor;
    let d1 = try_law!(distance_at(&inst.f, &inst.g, inst.params.s, r1, budget));
    let d2 = try_law!(distance_at(&inst.f, &inst.g, inst.params.s, r2, budget));
    if le(d2, d1) {
        LawStatus::Passed
    } else {
        violation(format!("r {r1} -> {r2} raised distance {d1:?} -> {d2:?}"))
    }
}

fn law_concatenation(rng: &mut ChaCha8Rng, _budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 5 });
    let w1 = random_walk(&inst.f, inst.params, rng.gen_range(1..=3), rng);
    let mid = w1.last().clone();
    let w2 = random_walk(&mid, inst.params, rng.gen_range(1..=3), rng);
    let target = w2.last().clone();
    let glued = match concatenate(&w1, &w2) {
        Ok(h) => h,
        Err(e) => return violation(e.to_string()),
    };
    if glued.length() != w1.length() + w2.length() {
        return violation("lengths do not add".to_string());
    }
    if is_valid_homotopy(&glued, &inst.f, &target) {
        LawStatus::Passed
    } else {
        violation("glued witness fails verification".to_string())
    }
}

fn law_post_compose_homotopy(rng: &mut ChaCha8Rng, _budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 4 });
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    let z = random_space(&mut rng2, 4, "outer");
    let h = if rng.gen_bool(0.4) {
        LipschitzMap::constant(&inst.y, &z, rng.gen_range(0..z.len())).expect("in range")
    } else {
        random_map(rng, &inst.y, &z)
    };
    let s2 = h.lipschitz_constant();
    let walk = random_walk(&inst.f, inst.params, 3, rng);
    let g = walk.last().clone();
    let composed_frames: Vec<LipschitzMap> = walk
        .frames
        .iter()
        .map(|frame| compose(&h, frame).expect("chain"))
        .collect();
    let hf = compose(&h, &inst.f).expect("chain");
    let hg = compose(&h, &g).expect("chain");
    let scaled = Homotopy {
        frames: composed_frames.clone(),
        params: ScaleParams::new(inst.params.s * s2, inst.params.r * s2).expect("nonnegative"),
    };
    if !is_valid_homotopy(&scaled, &hf, &hg) {
        return violation("composite homotopy fails at the rescaled bounds".to_string());
    }
    if s2 <= Scalar::one() {
        let unscaled = Homotopy {
            frames: composed_frames,
            params: inst.params,
        };
        if !is_valid_homotopy(&unscaled, &hf, &hg) {
            return violation(
                "contractive outer map should preserve the original bounds".to_string(),
            );
        }
    }
    LawStatus::Passed
}

fn law_pre_compose_homotopy(rng: &mut ChaCha8Rng, _budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 4 });
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    let z = random_space(&mut rng2, 4, "target");
    let h = random_map(rng, &inst.y, &z);
    let s2 = h.lipschitz_constant().max(Scalar::one());
    let r = random_r(rng, &z);
    let params = ScaleParams::new(s2, r).expect("nonnegative");
    let walk = random_walk(&h, params, 3, rng);
    let h2 = walk.last().clone();
    let s1 = inst.f.lipschitz_constant();
    let precomposed: Vec<LipschitzMap> = walk
        .frames
        .iter()
        .map(|frame| compose(frame, &inst.f).expect("chain"))
        .collect();
    let witness = Homotopy {
        frames: precomposed,
        params: ScaleParams::new(s1 * s2, r).expect("nonnegative"),
    };
    let lhs = compose(&h, &inst.f).expect("chain");
    let rhs = compose(&h2, &inst.f).expect("chain");
    if is_valid_homotopy(&witness, &lhs, &rhs) {
        LawStatus::Passed
    } else {
        violation("precomposed homotopy fails verification".to_string())
    }
}

fn law_post_composition_bound(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 4 });
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    let z = random_space(&mut rng2, 4, "outer");
    let h = random_map(rng, &inst.y, &z);
    let s2 = h.lipschitz_constant();
    let hf = compose(&h, &inst.f).expect("chain");
    let hg = compose(&h, &inst.g).expect("chain");
    let rhs = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let lhs = try_law!(distance_at(
        &hf,
        &hg,
        inst.params.s * s2,
        inst.params.r * s2,
        budget
    ));
    if le(lhs, rhs) {
        LawStatus::Passed
    } else {
        violation(format!(
            "outer composition raised distance {rhs:?} -> {lhs:?}"
        ))
    }
}

fn law_pre_composition_bound(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 4, max_y: 4 });
    let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
    let z = random_space(&mut rng2, 4, "inner");
    let h = random_map(rng, &z, &inst.x);
    let s2 = h.lipschitz_constant();
    let fh = compose(&inst.f, &h).expect("chain");
    let gh = compose(&inst.g, &h).expect("chain");
    let rhs = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let lhs = try_law!(distance_at(
        &fh,
        &gh,
        inst.params.s * s2.max(Scalar::one()),
        inst.params.r,
        budget
    ));
    if le(lhs, rhs) {
        LawStatus::Passed
    } else {
        violation(format!(
            "inner composition raised distance {rhs:?} -> {lhs:?}"
        ))
    }
}

fn law_cat_map_le_cat_domain(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 4, "dom");
    let y = random_space(rng, 4, "cod");
    let r = connectivity_threshold(&x).max(random_r(rng, &x));
    // a contractive map: walk out of a constant at unit frame scale
    let start = LipschitzMap::constant(&x, &y, rng.gen_range(0..y.len())).expect("in range");
    let params = ScaleParams::new(Scalar::one(), random_r(rng, &y)).expect("nonnegative");
    let f = random_walk(&start, params, 3, rng).last().clone();
    if f.lipschitz_constant() > Scalar::one() {
        return LawStatus::Skipped("walk produced a non-contractive map".to_string());
    }
    let lhs = try_law!(cat_map_value(&f, f.lipschitz_constant(), r, budget));
    let rhs = try_law!(cat_space_value(&x, r, budget));
    if le(lhs, rhs) {
        LawStatus::Passed
    } else {
        violation(format!("cat of map {lhs:?} exceeds cat of domain {rhs:?}"))
    }
}

fn law_cat_le_tc(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 3, "base");
    let r = connectivity_threshold(&x).max(random_r(rng, &x));
    let cat = try_law!(cat_space_value(&x, r, budget));
    let tc = match crate::invariants::tc_space(&x, r, ProductMetric::L1, budget) {
        Ok(v) => try_law!(dval(&v.value)),
        Err(e) => return violation(e.to_string()),
    };
    if le(cat, tc) {
        LawStatus::Passed
    } else {
        violation(format!("cat {cat:?} exceeds TC {tc:?}"))
    }
}

fn law_cat_map_le_cat_codomain(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 4, "dom");
    let y = random_space(rng, 4, "cod");
    let r = connectivity_threshold(&y).max(random_r(rng, &y));
    let f = random_map(rng, &x, &y);
    let lhs = try_law!(cat_map_value(&f, f.lipschitz_constant(), r, budget));
    let rhs = try_law!(cat_space_value(&y, r, budget));
    if le(lhs, rhs) {
        LawStatus::Passed
    } else {
        violation(format!(
            "cat of map {lhs:?} exceeds cat of codomain {rhs:?}"
        ))
    }
}

fn law_distance_le_cat_product(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 4, "dom");
    let y = random_space(rng, 4, "cod");
    let r = connectivity_threshold(&y).max(random_r(rng, &y));
    let f = random_map(rng, &x, &y);
    let g = random_map(rng, &x, &y);
    let s = f.lipschitz_constant().max(g.lipschitz_constant());
    let d = try_law!(distance_at(&f, &g, s, r, budget));
    let cf = try_law!(cat_map_value(&f, s, r, budget));
    let cg = try_law!(cat_map_value(&g, s, r, budget));
    let bound = match (cf, cg) {
        (Some(a), Some(b)) => Some((a + 1) * (b + 1) - 1),
        _ => None,
    };
    if le(d, bound) {
        LawStatus::Passed
    } else {
        violation(format!(
            "distance {d:?} exceeds product bound {bound:?} from cats {cf:?}, {cg:?}"
        ))
    }
}

fn law_mixed_composition_bound(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    mixed_composition(rng, budget, false)
}

fn law_mixed_composition_contractive(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    mixed_composition(rng, budget, true)
}

fn mixed_composition(rng: &mut ChaCha8Rng, budget: u64, contractive: bool) -> LawStatus {
    let mut seed_rng = ChaCha8Rng::seed_from_u64(rng.gen());
    let x = random_space(&mut seed_rng, 3, "mid");
    let y = random_space(&mut seed_rng, 4, "cod");
    let z = random_space(&mut seed_rng, 3, "dom");
    let r = random_r(rng, &y).max(random_r(rng, &x));
    // homotopic pair f ~ g at (s1, r) by construction
    let (s1, f) = if contractive {
        let start = LipschitzMap::constant(&x, &y, rng.gen_range(0..y.len())).expect("in range");
        let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
        let f = random_walk(&start, params, 2, rng).last().clone();
        (Scalar::one(), f)
    } else {
        let f = random_map(rng, &x, &y);
        (f.lipschitz_constant().max(Scalar::one()), f)
    };
    let params1 = ScaleParams::new(s1, r).expect("nonnegative");
    let g = random_walk(&f, params1, 3, rng).last().clone();
    let h = random_map(rng, &z, &x);
    let h2 = random_map(rng, &z, &x);
    let s2 = h.lipschitz_constant().max(h2.lipschitz_constant());
    let rhs = try_law!(distance_at(&h, &h2, s2, r, budget));
    let fh = compose(&f, &h).expect("chain");
    let gh2 = compose(&g, &h2).expect("chain");
    let (lhs_s, lhs_r) = if contractive {
        (s2, r)
    } else {
        (s1 * s2, (s1 + Scalar::one()) * r)
    };
    let lhs = try_law!(distance_at(&fh, &gh2, lhs_s, lhs_r, budget));
    if le(lhs, rhs) {
        LawStatus::Passed
    } else {
        violation(format!(
            "mixed composition raised distance {rhs:?} -> {lhs:?} (contractive = {contractive})"
        ))
    }
}

fn law_left_inverse_invariance(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 3, max_y: 4 });
    let (alpha, s2) = if rng.gen_bool(0.6) {
        let (_, alpha) = isometric_copy(&inst.y, rng, "w");
        (alpha, Scalar::one())
    } else {
        let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
        let y2 = random_space(&mut rng2, 4, "target");
        let alpha = random_map(rng, &inst.y, &y2);
        let s2 = alpha.lipschitz_constant();
        if s2.is_zero() {
            return LawStatus::Skipped("outer map is constant".to_string());
        }
        (alpha, s2)
    };
    let bound = Scalar::one() / s2;
    let beta = match find_homotopy_inverse(&alpha, inst.params.r, bound, budget) {
        Ok(Some(b)) => b,
        Ok(None) => return LawStatus::Skipped("no left homotopy inverse found".to_string()),
        Err(e) => return violation(e.to_string()),
    };
    let _ = beta;
    let af = compose(&alpha, &inst.f).expect("chain");
    let ag = compose(&alpha, &inst.g).expect("chain");
    let lhs = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let rhs = try_law!(distance_at(
        &af,
        &ag,
        inst.params.s * s2,
        inst.params.r * s2,
        budget
    ));
    if lhs == rhs {
        LawStatus::Passed
    } else {
        violation(format!(
            "distance {lhs:?} changed to {rhs:?} through an invertible outer map"
        ))
    }
}

fn law_right_inverse_invariance(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 3, max_y: 4 });
    let beta = if rng.gen_bool(0.6) {
        let (copy, iso) = isometric_copy(&inst.x, rng, "v");
        inverse_of_isometry(&copy, &inst.x, &iso)
    } else {
        let mut rng2 = ChaCha8Rng::seed_from_u64(rng.gen());
        let x2 = random_space(&mut rng2, 4, "source");
        random_map(rng, &x2, &inst.x)
    };
    let s2 = beta.lipschitz_constant();
    if s2.is_zero() {
        return LawStatus::Skipped("inner map is constant".to_string());
    }
    let bound = Scalar::one() / s2;
    let eta = match find_strict_section(&beta, bound) {
        Some(e) => e,
        None => return LawStatus::Skipped("no section within the Lipschitz bound".to_string()),
    };
    debug_assert_eq!(
        compose(&beta, &eta).expect("chain").values(),
        LipschitzMap::identity(&inst.x).values()
    );
    let fb = compose(&inst.f, &beta).expect("chain");
    let gb = compose(&inst.g, &beta).expect("chain");
    let lhs = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let rhs = try_law!(distance_at(
        &fb,
        &gb,
        inst.params.s * s2,
        inst.params.r,
        budget
    ));
    if lhs == rhs {
        LawStatus::Passed
    } else {
        violation(format!(
            "distance {lhs:?} changed to {rhs:?} through a sectioned inner map"
        ))
    }
}

fn law_conjugation_invariance(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let inst = generate_instance(rng.gen(), SizeCaps { max_x: 3, max_y: 4 });
    let (_, alpha) = isometric_copy(&inst.y, rng, "cy");
    let (copy_x, iso_x) = isometric_copy(&inst.x, rng, "cx");
    let beta = inverse_of_isometry(&copy_x, &inst.x, &iso_x);
    let conj_f = compose(&alpha, &compose(&inst.f, &beta).expect("chain")).expect("chain");
    let conj_g = compose(&alpha, &compose(&inst.g, &beta).expect("chain")).expect("chain");
    // wobble the conjugates by homotopic replacement
    let f2 = random_walk(&conj_f, inst.params, 2, rng).last().clone();
    let g2 = random_walk(&conj_g, inst.params, 2, rng).last().clone();
    let lhs = try_law!(distance_at(
        &inst.f,
        &inst.g,
        inst.params.s,
        inst.params.r,
        budget
    ));
    let rhs = try_law!(distance_at(&f2, &g2, inst.params.s, inst.params.r, budget));
    if lhs == rhs {
        LawStatus::Passed
    } else {
        violation(format!("conjugation changed distance {lhs:?} -> {rhs:?}"))
    }
}

fn law_cat_distance_chain(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 3, "base");
    let r = connectivity_threshold(&x).max(random_r(rng, &x));
    let one = Scalar::one();
    let cat = try_law!(cat_space_value(&x, r, budget));

    let id = LipschitzMap::identity(&x);
    let c0 = LipschitzMap::constant(&x, &x, 0).expect("nonempty");
    let d_id = try_law!(distance_at(&id, &c0, one, r, budget));

    let prod = product_l1(&x, &x);
    let i1 = axis1(&prod, 0).expect("in range");
    let i2 = axis2(&prod, 0).expect("in range");
    let c00 = LipschitzMap::constant(&x, &prod.space, prod.pair_index(0, 0)).expect("in range");
    let d_i1 = try_law!(distance_at(&i1, &c00, one, r, budget));
    let d_i2 = try_law!(distance_at(&i2, &c00, one, r, budget));
    let d_axes = try_law!(distance_at(&i1, &i2, one, r, budget));

    let chain = [cat, d_id, d_i1, d_i2, d_axes];
    if chain.iter().all(|v| *v == cat) {
        LawStatus::Passed
    } else {
        violation(format!(
            "equality chain broke: cat {cat:?}, id-vs-constant {d_id:?}, axis1 {d_i1:?}, axis2 {d_i2:?}, axis-vs-axis {d_axes:?}"
        ))
    }
}

fn law_cat_map_as_distance(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 4, "dom");
    let y = random_space(rng, 4, "cod");
    let r = connectivity_threshold(&y).max(random_r(rng, &y));
    let f = random_map(rng, &x, &y);
    let s = f.lipschitz_constant();
    let cat = try_law!(cat_map_value(&f, s, r, budget));
    let y0 = rng.gen_range(0..y.len());
    let c = LipschitzMap::constant(&x, &y, y0).expect("in range");
    let d = try_law!(distance_at(&f, &c, s, r, budget));
    if cat == d {
        LawStatus::Passed
    } else {
        violation(format!(
            "cat {cat:?} but distance to a fixed constant {d:?}"
        ))
    }
}

fn law_tc_sections(rng: &mut ChaCha8Rng, budget: u64) -> LawStatus {
    let x = random_space(rng, 3, "base");
    let metric = if rng.gen_bool(0.3) {
        ProductMetric::Max
    } else {
        ProductMetric::L1
    };
    let r = connectivity_threshold(&x).max(random_r(rng, &x));
    let tc = match crate::invariants::tc_space(&x, r, metric, budget) {
        Ok(v) => v,
        Err(e) => return violation(e.to_string()),
    };
    let value = try_law!(dval(&tc.value));
    let DistanceResult::Finite { cover, witnesses, .. } = &tc.value else {
        return if value.is_none() {
            LawStatus::Passed // infinity on a disconnected space is consistent
        } else {
            violation("finite value without certificates".to_string())
        };
    };
    let prod = tc_product(&x, metric);
    let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
    for (subset, witness) in cover.iter().zip(witnesses) {
        // section axioms for the converted plan
        let plan = motion_plan_from_witness(&prod, subset, witness);
        if let Err(e) = verify_motion_plan(&plan, &prod, r) {
            return violation(format!("converted section fails: {e}"));
        }
        // and back: the plan data reassembles into a verified homotopy
        let rebuilt = Homotopy {
            frames: (0..witness.frames.len())
                .map(|j| {
                    LipschitzMap::new(
                        &witness.first().domain,
                        &x,
                        plan.paths.iter().map(|p| p.points[j]).collect(),
                    )
                    .expect("in range")
                })
                .collect(),
            params,
        };
        let p1 = crate::maps::restrict(&projection1(&prod), subset).expect("restricts");
        let p2 = crate::maps::restrict(&projection2(&prod), subset).expect("restricts");
        if verify_homotopy(&rebuilt, &p1, &p2)
            .map(|v| !v.is_empty())
            .unwrap_or(true)
        {
            return violation("rebuilt homotopy from sections fails verification".to_string());
        }
    }
    LawStatus::Passed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = generate_instance(0, SizeCaps::default());
        let b = generate_instance(0, SizeCaps::default());
        assert_eq!(instance_digest(&a), instance_digest(&b));
        let c = generate_instance(1, SizeCaps::default());
        assert_ne!(instance_digest(&a), instance_digest(&c));
    }

    #[test]
    fn generated_maps_are_lipschitz_at_their_constant() {
        for seed in 0..20 {
            let inst = generate_instance(seed, SizeCaps::default());
            assert!(inst.f.is_s_lipschitz(inst.f.lipschitz_constant()).is_ok());
            assert!(inst.g.is_s_lipschitz(inst.params.s).is_ok());
        }
    }

    #[test]
    fn inverse_search_finds_left_homotopy_inverses() {
        // the returned map need not be the strict inverse (a rotation of the
        // hexagon already deforms to the identity), but its composite with
        // the input must
        let c6 = cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let params = ScaleParams::new(Scalar::one(), Scalar::one()).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in [id.clone(), isometric_copy(&c6, &mut rng, "k").1] {
            let beta = find_homotopy_inverse(&alpha, Scalar::one(), Scalar::one(), 1_000_000)
                .unwrap()
                .expect("isometries have left homotopy inverses");
            assert!(beta.lipschitz_constant() <= Scalar::one());
            let composite = compose(&beta, &alpha).unwrap();
            let verdict = find_homotopy(&composite, &id, params, 1_000_000).unwrap();
            assert!(verdict.is_found());
        }
    }

    #[test]
    fn strict_sections_exist_for_bijections() {
        let c4 = cycle_geodesic(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (copy, iso) = isometric_copy(&c4, &mut rng, "m");
        let beta = inverse_of_isometry(&copy, &c4, &iso);
        let eta = find_strict_section(&beta, Scalar::one()).expect("bijections have sections");
        assert_eq!(
            compose(&beta, &eta).unwrap().values(),
            LipschitzMap::identity(&c4).values()
        );
    }

    #[test]
    fn suite_smoke_run_is_deterministic_and_clean() {
        let cfg = LawConfig {
            trials: 6,
            seed: 42,
            budget: 200_000,
            workers: 1,
        };
        let report1 = run_suite(None, cfg);
        let report2 = run_suite(None, cfg);
        assert_eq!(
            serde_json::to_string(&report1).unwrap(),
            serde_json::to_string(&report2).unwrap()
        );
        assert_eq!(report1.total_violations(), 0, "{report1:?}");
    }

    #[test]
    fn replay_matches_suite_outcome() {
        let cfg = LawConfig {
            trials: 3,
            seed: 7,
            budget: 200_000,
            workers: 1,
        };
        for law in law_registry() {
            for trial in 0..cfg.trials {
                let a = run_single(law.id, cfg, trial).unwrap();
                let b = run_single(law.id, cfg, trial).unwrap();
                assert_eq!(a, b, "law {} trial {trial}", law.id);
            }
        }
    }
}
