//! Discrete homotopy of Lipschitz maps on finite metric spaces.
//!
//! Everything is driven by two scale parameters: frames of a homotopy are
//! s-Lipschitz maps, and each point may move at most r per time step. On a
//! finite metric space that makes homotopy a reachability question in an
//! implicit graph of maps, homotopic distance a minimal-cover question over
//! subsets where the restrictions are homotopic, and the category and
//! complexity invariants special cases of that distance.

pub mod analytic;
mod cover;
pub mod distance;
pub mod homotopy;
pub mod io;
pub mod laws;
pub mod maps;
pub mod scalar;
pub mod search;
pub mod space;
pub mod invariants;

pub use distance::{
    default_scale, dr_sweep, homotopic_distance, is_good_subset, verify_distance_certificate,
    DistanceResult, DistanceSolver, SubsetVerdict, SweepRow,
};
pub use homotopy::{
    concatenate, extend, is_valid_homotopy, restrict_homotopy, reverse, verify_homotopy, Homotopy,
    Violation,
};
pub use invariants::{
    cat_map, cat_space, is_r_contractible, tc_space, ContractVerdict, InvariantMethod,
    InvariantResult, MotionPlan,
};
pub use maps::{compose, restrict, LipschitzMap, ScaleParams};
pub use scalar::{parse_scalar, Scalar, Tolerance};
pub use search::{find_homotopy, find_homotopy_to_any, HomotopyVerdict, DEFAULT_BUDGET};
pub use space::{
    cycle_chord, cycle_geodesic, interval, is_r_connected, product, product_l1, subspace,
    two_hole_grid, FiniteMetricSpace, PointSubset, ProductMetric, ProductSpace, Rect, SpaceRef,
};
