//! Category-style invariants: contractibility of spaces, cat of spaces and
//! maps, and topological complexity, each computable by its defining cover
//! and via the homotopic distance it equals.

use std::sync::Arc;

use crate::cover::{minimal_cover_by, CoverOutcome};
use crate::distance::{DistanceError, DistanceResult, DistanceSolver, SubsetVerdict};
use crate::homotopy::Homotopy;
use crate::maps::{projection1, projection2, LipschitzMap, ScaleParams};
use crate::scalar::Scalar;
use crate::search::{find_homotopy_to_any, HomotopyVerdict};
use crate::space::{
    product, subspace, PointSubset, ProductMetric, ProductSpace, RPath, SpaceRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantMethod {
    ByDefinition,
    ViaDistance,
}

/// An invariant value with its certificate. For TC the certificate also
/// carries the motion-planning sections recovered from the witnesses.
#[derive(Debug)]
pub struct InvariantResult {
    pub value: DistanceResult,
    pub method: InvariantMethod,
    pub motion_plans: Option<Vec<MotionPlan>>,
}

impl InvariantResult {
    pub fn k(&self) -> Option<usize> {
        self.value.finite_k()
    }
}

#[derive(Debug)]
pub enum ContractVerdict {
    Contractible(Homotopy),
    NotContractible { explored: usize },
    BudgetExceeded { visited: usize },
}

/// Does the identity deform to some constant through 1-Lipschitz frames
/// with steps at most r?
pub fn is_r_contractible(
    space: &SpaceRef,
    r: Scalar,
    budget: u64,
) -> Result<ContractVerdict, DistanceError> {
    let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
    let id = LipschitzMap::identity(space);
    let targets: Vec<LipschitzMap> = (0..space.len())
        .map(|x| LipschitzMap::constant(space, space, x).expect("in range"))
        .collect();
    Ok(match find_homotopy_to_any(&id, &targets, params, budget)? {
        HomotopyVerdict::Found(h) => ContractVerdict::Contractible(h),
        HomotopyVerdict::NotHomotopic { explored } => ContractVerdict::NotContractible { explored },
        HomotopyVerdict::BudgetExceeded { visited } => ContractVerdict::BudgetExceeded { visited },
    })
}

fn outcome_to_result(space: &SpaceRef, outcome: CoverOutcome) -> (DistanceResult, Vec<Homotopy>) {
    match outcome {
        CoverOutcome::Exact { sets, witnesses } => {
            let cover: Vec<PointSubset> = sets
                .iter()
                .map(|&m| {
                    PointSubset::new(space, (0..64).filter(|i| m >> i & 1 == 1).collect())
                        .expect("nonempty")
                })
                .collect();
            let k = sets.len() - 1;
            (
                DistanceResult::Finite {
                    k,
                    cover,
                    witnesses: witnesses.clone(),
                },
                witnesses,
            )
        }
        CoverOutcome::Truncated { lower, upper, note } => {
            (DistanceResult::Bounded { lower, upper, note }, Vec::new())
        }
    }
}

/// cat of a space: minimal cover by subsets whose inclusion contracts to a
/// point of the subset through frames into the ambient space.
pub fn cat_space(
    space: &SpaceRef,
    r: Scalar,
    budget: u64,
    method: InvariantMethod,
) -> Result<InvariantResult, DistanceError> {
    let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
    match method {
        InvariantMethod::ViaDistance => {
            let id = LipschitzMap::identity(space);
            let c0 = LipschitzMap::constant(space, space, 0).expect("nonempty space");
            let value = DistanceSolver::new(&id, &c0, params, budget)?.homotopic_distance()?;
            Ok(InvariantResult {
                value,
                method,
                motion_plans: None,
            })
        }
        InvariantMethod::ByDefinition => {
            let outcome = minimal_cover_by(space.len(), |mask| {
                let subset =
                    PointSubset::new(space, (0..64).filter(|i| mask >> i & 1 == 1).collect())?;
                let sub = subspace(space, &subset)?;
                let incl = LipschitzMap::new(
                    &sub,
                    space,
                    subset.indices.clone(),
                )?;
                let targets: Vec<LipschitzMap> = subset
                    .indices
                    .iter()
                    .map(|&x| LipschitzMap::constant(&sub, space, x).expect("in range"))
                    .collect();
                Ok(match find_homotopy_to_any(&incl, &targets, params, budget)? {
                    HomotopyVerdict::Found(h) => SubsetVerdict::Good(h),
                    HomotopyVerdict::NotHomotopic { explored } => SubsetVerdict::Bad { explored },
                    HomotopyVerdict::BudgetExceeded { visited } => {
                        SubsetVerdict::Unknown { visited }
                    }
                })
            })?;
            let (value, _) = outcome_to_result(space, outcome);
            Ok(InvariantResult {
                value,
                method,
                motion_plans: None,
            })
        }
    }
}

/// cat of a map: minimal cover on which the restriction is homotopic to some
/// constant map (any target point of the codomain).
pub fn cat_map(
    f: &LipschitzMap,
    r: Scalar,
    budget: u64,
    method: InvariantMethod,
) -> Result<InvariantResult, DistanceError> {
    let s = f.lipschitz_constant();
    let params = ScaleParams::new(s, r).expect("nonnegative");
    match method {
        InvariantMethod::ViaDistance => {
            let c0 = LipschitzMap::constant(&f.domain, &f.codomain, 0).expect("nonempty");
            let value = DistanceSolver::new(f, &c0, params, budget)?.homotopic_distance()?;
            Ok(InvariantResult {
                value,
                method,
                motion_plans: None,
            })
        }
        InvariantMethod::ByDefinition => {
            let targets_of = |sub: &SpaceRef| -> Vec<LipschitzMap> {
                (0..f.codomain.len())
                    .map(|y| LipschitzMap::constant(sub, &f.codomain, y).expect("in range"))
                    .collect()
            };
            let outcome = minimal_cover_by(f.domain.len(), |mask| {
                let subset = PointSubset::new(
                    &f.domain,
                    (0..64).filter(|i| mask >> i & 1 == 1).collect(),
                )?;
                let fu = crate::maps::restrict(f, &subset)?;
                let targets = targets_of(&fu.domain);
                Ok(match find_homotopy_to_any(&fu, &targets, params, budget)? {
                    HomotopyVerdict::Found(h) => SubsetVerdict::Good(h),
                    HomotopyVerdict::NotHomotopic { explored } => SubsetVerdict::Bad { explored },
                    HomotopyVerdict::BudgetExceeded { visited } => {
                        SubsetVerdict::Unknown { visited }
                    }
                })
            })?;
            let (value, _) = outcome_to_result(&f.domain, outcome);
            Ok(InvariantResult {
                value,
                method,
                motion_plans: None,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Topological complexity and motion plans
// ---------------------------------------------------------------------------

/// A section over one cover element: for each pair (x, y) an r-path from x
/// to y, all of common length, continuous in the 1-Lipschitz sense.
#[derive(Debug, Clone)]
pub struct MotionPlan {
    pub subset: PointSubset,
    pub paths: Vec<RPath>,
}

/// Checks the three section conditions against the product structure.
pub fn verify_motion_plan(
    plan: &MotionPlan,
    product: &ProductSpace,
    r: Scalar,
) -> Result<(), String> {
    if plan.paths.len() != plan.subset.len() {
        return Err("one path per covered pair required".to_string());
    }
    let m = plan.paths.first().map_or(0, |p| p.points.len());
    for (slot, (&pair, path)) in plan.subset.indices.iter().zip(&plan.paths).enumerate() {
        if path.points.len() != m {
            return Err(format!("path {slot} has a different horizon"));
        }
        let (x, y) = product.components(pair);
        if path.points.first() != Some(&x) || path.points.last() != Some(&y) {
            return Err(format!("path {slot} does not run from {x} to {y}"));
        }
        if let Err((step, gap)) = path.check(r) {
            return Err(format!("path {slot} jumps {gap} > r at step {step}"));
        }
    }
    // 1-Lipschitz into path space with the uniform metric
    let space = &product.left;
    for a in 0..plan.paths.len() {
        for b in (a + 1)..plan.paths.len() {
            let bound = product
                .space
                .d(plan.subset.indices[a], plan.subset.indices[b]);
            for j in 0..m {
                let gap = space.d(plan.paths[a].points[j], plan.paths[b].points[j]);
                if gap > bound {
                    return Err(format!(
                        "section stretches pairs {a},{b} at time {j}: {gap} > {bound}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// TC of a space: the distance between the two product projections, with
/// each witness converted into a motion-planning section. The section length
/// is shared across the cover because distance witnesses are horizon
/// equalized.
pub fn tc_space(
    space: &SpaceRef,
    r: Scalar,
    metric: ProductMetric,
    budget: u64,
) -> Result<InvariantResult, DistanceError> {
    let prod = product(space, space, metric);
    let params = ScaleParams::new(Scalar::one(), r).expect("nonnegative");
    let p1 = projection1(&prod);
    let p2 = projection2(&prod);
    let value = DistanceSolver::new(&p1, &p2, params, budget)?.homotopic_distance()?;
    let motion_plans = match &value {
        DistanceResult::Finite { cover, witnesses, .. } => {
            let plans: Vec<MotionPlan> = cover
                .iter()
                .zip(witnesses)
                .map(|(subset, witness)| motion_plan_from_witness(&prod, subset, witness))
                .collect();
            for plan in &plans {
                verify_motion_plan(plan, &prod, r)
                    .expect("witness-derived sections satisfy the section conditions");
            }
            Some(plans)
        }
        _ => None,
    };
    Ok(InvariantResult {
        value,
        method: InvariantMethod::ViaDistance,
        motion_plans,
    })
}

/// S(x, y)(j) = H(x, y, j): read each pair's trajectory out of the homotopy.
pub fn motion_plan_from_witness(
    product: &ProductSpace,
    subset: &PointSubset,
    witness: &Homotopy,
) -> MotionPlan {
    let paths = (0..subset.len())
        .map(|slot| RPath {
            space: Arc::clone(&product.left),
            points: witness.frames.iter().map(|f| f.apply(slot)).collect(),
        })
        .collect();
    MotionPlan {
        subset: subset.clone(),
        paths,
    }
}

/// The product space TC computations run on, exposed so callers can inspect
/// certificates against the same structure.
pub fn tc_product(space: &SpaceRef, metric: ProductMetric) -> ProductSpace {
    product(space, space, metric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use crate::search::DEFAULT_BUDGET;
    use crate::space::{cycle_geodesic, interval, FiniteMetricSpace};

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    #[test]
    fn single_point_space_is_trivial() {
        let one = interval(0);
        assert!(matches!(
            is_r_contractible(&one, s("1"), DEFAULT_BUDGET).unwrap(),
            ContractVerdict::Contractible(_)
        ));
        let cat = cat_space(&one, s("1"), DEFAULT_BUDGET, InvariantMethod::ByDefinition).unwrap();
        assert_eq!(cat.k(), Some(0));
        let tc = tc_space(&one, s("1"), ProductMetric::L1, DEFAULT_BUDGET).unwrap();
        assert_eq!(tc.k(), Some(0));
    }

    #[test]
    fn square_contracts_at_step_one() {
        let c4 = cycle_geodesic(4).unwrap();
        assert!(matches!(
            is_r_contractible(&c4, s("1"), DEFAULT_BUDGET).unwrap(),
            ContractVerdict::Contractible(_)
        ));
        for method in [InvariantMethod::ByDefinition, InvariantMethod::ViaDistance] {
            let cat = cat_space(&c4, s("1"), DEFAULT_BUDGET, method).unwrap();
            assert_eq!(cat.k(), Some(0), "method {method:?}");
        }
    }

    #[test]
    fn hexagon_needs_two_arcs() {
        let c6 = cycle_geodesic(6).unwrap();
        assert!(matches!(
            is_r_contractible(&c6, s("1"), DEFAULT_BUDGET).unwrap(),
            ContractVerdict::NotContractible { .. }
        ));
        for method in [InvariantMethod::ByDefinition, InvariantMethod::ViaDistance] {
            let cat = cat_space(&c6, s("1"), DEFAULT_BUDGET, method).unwrap();
            assert_eq!(cat.k(), Some(1), "method {method:?}");
        }
    }

    #[test]
    fn cat_of_identity_matches_cat_of_space() {
        let c6 = cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let via_map = cat_map(&id, s("1"), DEFAULT_BUDGET, InvariantMethod::ByDefinition).unwrap();
        let via_space =
            cat_space(&c6, s("1"), DEFAULT_BUDGET, InvariantMethod::ByDefinition).unwrap();
        assert_eq!(via_map.k(), via_space.k());
    }

    #[test]
    fn constant_map_has_cat_zero() {
        let c6 = cycle_geodesic(6).unwrap();
        let c = LipschitzMap::constant(&c6, &c6, 2).unwrap();
        let cat = cat_map(&c, s("1"), DEFAULT_BUDGET, InvariantMethod::ByDefinition).unwrap();
        assert_eq!(cat.k(), Some(0));
    }

    #[test]
    fn two_point_space_has_tc_zero_with_verified_sections() {
        let pair = FiniteMetricSpace::build(
            "pair",
            vec!["a".into(), "b".into()],
            vec![
                vec![s("0"), s("1")],
                vec![s("1"), s("0")],
            ],
        )
        .unwrap();
        for metric in [ProductMetric::L1, ProductMetric::Max] {
            let tc = tc_space(&pair, s("1"), metric, DEFAULT_BUDGET).unwrap();
            assert_eq!(tc.k(), Some(0), "metric {metric:?}");
            let plans = tc.motion_plans.expect("finite TC exports sections");
            assert_eq!(plans.len(), 1);
        }
    }
}
