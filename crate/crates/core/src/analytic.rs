//! Sampled analytic examples on the float backend, and the two-hole grid
//! instance with its path maps.
//!
//! The circle example verifies a closed-form homotopy between power maps at
//! sampled points rather than searching for one; the exact core cannot hold
//! the punctured plane, so the frames live on floats behind a tolerance.
//! The two-hole instance feeds the exact core: an integer grid with two
//! rectangular holes and two unit-speed paths from a shared start to a
//! shared end, one over the holes and one under.

use num_complex::Complex64;
use thiserror::Error;

use crate::homotopy::{concatenate, reverse, Homotopy};
use crate::maps::{LipschitzMap, MapError, ScaleParams};
use crate::scalar::{Scalar, Tolerance};
use crate::space::{
    interval, shortest_r_path, two_hole_grid, GridGeometry, Rect, SpaceError, SpaceRef,
};

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("power map exponents must be at least 1")]
    BadExponent,
    #[error("step scale must be positive")]
    BadStep,
    #[error("need at least 3 samples")]
    TooFewSamples,
    #[error("frame {frame} vanishes at sample {sample}; the target space excludes the origin")]
    FrameHitsOrigin { frame: usize, sample: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

// ---------------------------------------------------------------------------
// Power maps on the sampled circle
// ---------------------------------------------------------------------------

/// The straight-line homotopy between z^n and z^k evaluated at N circle
/// samples: frame j sends z to ((m-j) z^n + j z^k) / m, with the horizon
/// m = 2 floor(2/r) + 1 chosen odd so no frame can hit the origin.
#[derive(Debug, Clone)]
pub struct PowerMapHomotopy {
    pub n: u32,
    pub k: u32,
    pub r: Scalar,
    pub m: usize,
    pub samples: Vec<Complex64>,
    /// frames[j][i] = value of frame j at sample i
    pub frames: Vec<Vec<Complex64>>,
}

pub fn power_map_horizon(r: Scalar) -> Result<usize, AnalyticError> {
    if r <= Scalar::zero() {
        return Err(AnalyticError::BadStep);
    }
    let floor = (Scalar::from_int(2) / r).floor_int();
    Ok((2 * floor + 1) as usize)
}

pub fn power_map_homotopy(
    n: u32,
    k: u32,
    r: Scalar,
    sample_count: usize,
) -> Result<PowerMapHomotopy, AnalyticError> {
    if n == 0 || k == 0 {
        return Err(AnalyticError::BadExponent);
    }
    if sample_count < 3 {
        return Err(AnalyticError::TooFewSamples);
    }
    let m = power_map_horizon(r)?;
    let samples: Vec<Complex64> = (0..sample_count)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / sample_count as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    let mut frames = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let row: Vec<Complex64> = samples
            .iter()
            .map(|z| {
                let zn = z.powu(n);
                let zk = z.powu(k);
                (zn * (m - j) as f64 + zk * j as f64) / m as f64
            })
            .collect();
        // parity keeps frames away from the origin; checked anyway
        for (sample, v) in row.iter().enumerate() {
            if v.norm() < 1e-12 {
                return Err(AnalyticError::FrameHitsOrigin { frame: j, sample });
            }
        }
        frames.push(row);
    }
    Ok(PowerMapHomotopy {
        n,
        k,
        r,
        m,
        samples,
        frames,
    })
}

/// Worst observed ratios from checking the sampled frames, plus any witness
/// that broke the tolerance.
#[derive(Debug, Clone)]
pub struct AnalyticReport {
    pub frame_scale: f64,
    pub step_scale: f64,
    pub max_frame_ratio: f64,
    pub max_step_ratio: f64,
    pub frame_violation: Option<(usize, usize, usize)>,
    pub step_violation: Option<(usize, usize)>,
}

impl AnalyticReport {
    pub fn passed(&self) -> bool {
        self.frame_violation.is_none() && self.step_violation.is_none()
    }
}

/// Checks every sample pair in every frame against the frame scale s, and
/// every consecutive step at every sample against the step scale r, with
/// the tolerance's relative slack.
pub fn verify_analytic(
    pm: &PowerMapHomotopy,
    s: f64,
    r: f64,
    tolerance: Tolerance,
) -> AnalyticReport {
    let mut report = AnalyticReport {
        frame_scale: s,
        step_scale: r,
        max_frame_ratio: 0.0,
        max_step_ratio: 0.0,
        frame_violation: None,
        step_violation: None,
    };
    let count = pm.samples.len();
    for (j, frame) in pm.frames.iter().enumerate() {
        for a in 0..count {
            for b in (a + 1)..count {
                let gap = (frame[a] - frame[b]).norm();
                let base = (pm.samples[a] - pm.samples[b]).norm();
                let ratio = gap / base;
                if ratio > report.max_frame_ratio {
                    report.max_frame_ratio = ratio;
                }
                if !tolerance.le(gap, s * base) && report.frame_violation.is_none() {
                    report.frame_violation = Some((j, a, b));
                }
            }
        }
    }
    for j in 0..pm.m {
        for i in 0..count {
            let gap = (pm.frames[j + 1][i] - pm.frames[j][i]).norm();
            if gap > report.max_step_ratio {
                report.max_step_ratio = gap;
            }
            if !tolerance.le(gap, r) && report.step_violation.is_none() {
                report.step_violation = Some((j, i));
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// The two-hole grid instance
// ---------------------------------------------------------------------------

/// A two-hole grid with two unit-speed path maps from a shared start to a
/// shared end, one routed above both holes and one below, plus the measured
/// discrete diameter of each hole (the cheapest single-step vertical jump
/// across it).
#[derive(Debug)]
pub struct TwoHoleInstance {
    pub space: SpaceRef,
    pub geometry: GridGeometry,
    pub domain: SpaceRef,
    pub f: LipschitzMap,
    pub g: LipschitzMap,
    pub measured: [Scalar; 2],
}

/// The cheapest one-step crossing of a hole: the minimum free-space distance
/// between a cell directly above and the cell directly below, over the
/// hole's columns.
fn measured_diameter(space: &SpaceRef, geometry: &GridGeometry, hole: &Rect) -> Scalar {
    let mut best: Option<Scalar> = None;
    for x in hole.x0..=hole.x1 {
        let above = geometry.cell_index(x, hole.y0 - 1);
        let below = geometry.cell_index(x, hole.y1 + 1);
        if let (Some(a), Some(b)) = (above, below) {
            let d = space.d(a, b);
            best = Some(best.map_or(d, |cur: Scalar| cur.min(d)));
        }
    }
    best.expect("holes sit strictly inside the grid")
}

pub fn two_hole_instance(
    w: i64,
    h: i64,
    hole0: Rect,
    hole1: Rect,
) -> Result<TwoHoleInstance, AnalyticError> {
    let (space, geometry) = two_hole_grid(w, h, hole0, hole1)?;
    let d0 = measured_diameter(&space, &geometry, &geometry.holes[0]);
    let d1 = measured_diameter(&space, &geometry, &geometry.holes[1]);
    let (measured, low_hole) = if d0 <= d1 {
        ([d0, d1], 0)
    } else {
        ([d1, d0], 1)
    };
    let _ = low_hole;

    // route one path along the top edge, the other along the bottom edge,
    // from mid-left to mid-right
    let mid = h / 2;
    let start = (0i64, mid);
    let end = (w - 1, mid);
    let top_route = route_via(&geometry, start, 0, end);
    let bottom_route = route_via(&geometry, start, h - 1, end);
    let steps = top_route.len().max(bottom_route.len()) - 1;
    let domain = interval(steps);
    let to_map = |route: &[(i64, i64)]| -> Result<LipschitzMap, AnalyticError> {
        let mut values: Vec<usize> = route
            .iter()
            .map(|&(x, y)| geometry.cell_index(x, y).expect("route stays in free cells"))
            .collect();
        let last = *values.last().expect("nonempty route");
        values.resize(steps + 1, last);
        Ok(LipschitzMap::new(&domain, &space, values)?)
    };
    let f = to_map(&top_route)?;
    let g = to_map(&bottom_route)?;
    Ok(TwoHoleInstance {
        space,
        geometry,
        domain,
        f,
        g,
        measured,
    })
}

/// L-shaped route: vertical to the transit row, across, vertical to the end.
fn route_via(geometry: &GridGeometry, start: (i64, i64), row: i64, end: (i64, i64)) -> Vec<(i64, i64)> {
    let mut cells = vec![start];
    let mut cur = start;
    let step_toward = |v: i64, target: i64| v + (target - v).signum();
    while cur.1 != row {
        cur = (cur.0, step_toward(cur.1, row));
        cells.push(cur);
    }
    while cur.0 != end.0 {
        cur = (step_toward(cur.0, end.0), cur.1);
        cells.push(cur);
    }
    while cur.1 != end.1 {
        cur = (cur.0, step_toward(cur.1, end.1));
        cells.push(cur);
    }
    debug_assert!(cells
        .iter()
        .all(|&(x, y)| geometry.cell_index(x, y).is_some()));
    cells
}

// ---------------------------------------------------------------------------
// Interval-domain contraction
// ---------------------------------------------------------------------------

/// Reels a map on an interval domain back to the constant at its left
/// endpoint: frame t sends x to f(max(x - t, 0)). Frames are restrictions
/// of f composed with a 1-Lipschitz clamp, so they stay s-Lipschitz, and
/// each point's step is one domain unit, hence at most max consecutive
/// image gap.
///
/// This is what makes any two path maps on a connected grid homotopic once
/// r covers a single path step: every interval-domain map contracts, and
/// the two constant endpoints join along any r-path.
pub fn contract_interval_map(f: &LipschitzMap, params: ScaleParams) -> Option<Homotopy> {
    let n = f.domain.len();
    // the domain must carry the interval metric d(i, j) = |i - j| * unit
    let unit = if n >= 2 {
        f.domain.d(0, 1)
    } else {
        Scalar::one()
    };
    for i in 0..n {
        for j in 0..n {
            let expected = Scalar::from_int((i as i64 - j as i64).abs()) * unit;
            if f.domain.d(i, j) != expected {
                return None;
            }
        }
    }
    // step bound: the largest single-step image move
    for x in 0..n.saturating_sub(1) {
        if f.codomain.d(f.apply(x), f.apply(x + 1)) > params.r {
            return None;
        }
    }
    if f.is_s_lipschitz(params.s).is_err() {
        return None;
    }
    let frames = (0..n)
        .map(|t| {
            let values = (0..n).map(|x| f.apply(x.saturating_sub(t))).collect();
            LipschitzMap::new(&f.domain, &f.codomain, values).expect("values in range")
        })
        .collect();
    Some(Homotopy { frames, params })
}

/// Homotopy between two constant maps along a shortest r-path.
pub fn connect_constants(
    domain: &SpaceRef,
    codomain: &SpaceRef,
    from: usize,
    to: usize,
    params: ScaleParams,
) -> Option<Homotopy> {
    let path = shortest_r_path(codomain, params.r, from, to)?;
    let frames = path
        .points
        .iter()
        .map(|&y| LipschitzMap::constant(domain, codomain, y).expect("in range"))
        .collect();
    Some(Homotopy { frames, params })
}

/// Constructed whole-domain witness f ~ g for interval-domain maps:
/// contract f to its left endpoint, slide the constant to g's left
/// endpoint, and run g's contraction backwards.
pub fn interval_zero_distance_witness(
    f: &LipschitzMap,
    g: &LipschitzMap,
    params: ScaleParams,
) -> Option<Homotopy> {
    let reel_f = contract_interval_map(f, params)?;
    let reel_g = contract_interval_map(g, params)?;
    let bridge = connect_constants(
        &f.domain,
        &f.codomain,
        f.apply(0),
        g.apply(0),
        params,
    )?;
    let first = concatenate(&reel_f, &bridge).ok()?;
    concatenate(&first, &reverse(&reel_g)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::is_valid_homotopy;
    use crate::scalar::parse_scalar;

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    #[test]
    fn horizon_formula() {
        assert_eq!(power_map_horizon(s("1/2")).unwrap(), 9);
        assert_eq!(power_map_horizon(s("1/5")).unwrap(), 21);
        assert_eq!(power_map_horizon(s("2")).unwrap(), 3);
        assert_eq!(power_map_horizon(s("1")).unwrap(), 5);
        assert!(power_map_horizon(s("0")).is_err());
    }

    #[test]
    fn equal_exponents_give_constant_frames() {
        let pm = power_map_homotopy(2, 2, s("1"), 24).unwrap();
        for frame in &pm.frames {
            for (value, base) in frame.iter().zip(&pm.frames[0]) {
                assert!((value - base).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_circle_examples_pass_verification() {
        let tol = Tolerance::default();
        for (n, k, r) in [(1u32, 2u32, "1/2"), (2, 3, "1/5")] {
            let pm = power_map_homotopy(n, k, s(r), 60).unwrap();
            let smax = n.max(k) as f64;
            let report = verify_analytic(&pm, smax, s(r).to_f64(), tol);
            assert!(report.passed(), "({n},{k},{r}): {report:?}");
        }
    }

    #[test]
    fn tampered_frame_is_named() {
        let mut pm = power_map_homotopy(1, 2, s("1/2"), 30).unwrap();
        pm.frames[3][7] += Complex64::new(0.5, 0.0);
        let report = verify_analytic(&pm, 2.0, 0.5, Tolerance::default());
        assert!(!report.passed());
        let (frame, a, b) = report.frame_violation.expect("frame check fails");
        assert_eq!(frame, 3);
        assert!(a == 7 || b == 7);
    }

    #[test]
    fn two_hole_instance_is_well_formed() {
        let hole0 = Rect { x0: 3, y0: 4, x1: 4, y1: 5 };
        let hole1 = Rect { x0: 9, y0: 3, x1: 12, y1: 6 };
        let inst = two_hole_instance(15, 10, hole0, hole1).unwrap();
        assert!(inst.measured[0] < inst.measured[1]);
        assert!(inst.f.is_s_lipschitz(s("1")).is_ok());
        assert!(inst.g.is_s_lipschitz(s("1")).is_ok());
        // shared endpoints
        assert_eq!(inst.f.apply(0), inst.g.apply(0));
        let last = inst.domain.len() - 1;
        assert_eq!(inst.f.apply(last), inst.g.apply(last));
    }

    #[test]
    fn interval_contraction_and_bridge_verify() {
        let hole0 = Rect { x0: 3, y0: 4, x1: 4, y1: 5 };
        let hole1 = Rect { x0: 9, y0: 3, x1: 12, y1: 6 };
        let inst = two_hole_instance(15, 10, hole0, hole1).unwrap();
        let params = ScaleParams::new(s("1"), s("1")).unwrap();
        let witness = interval_zero_distance_witness(&inst.f, &inst.g, params)
            .expect("unit-speed paths contract at r = 1");
        assert!(is_valid_homotopy(&witness, &inst.f, &inst.g));
    }

    #[test]
    fn contraction_requires_an_interval_metric() {
        let c6 = crate::space::cycle_geodesic(6).unwrap();
        let id = LipschitzMap::identity(&c6);
        let params = ScaleParams::new(s("1"), s("1")).unwrap();
        assert!(contract_interval_map(&id, params).is_none());
    }
}
