//! Finite metric spaces: validated distance matrices, the generators used
//! throughout (intervals, cycles, grids with holes), l1/max products,
//! subspaces, and r-connectivity.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;

pub type SpaceRef = Arc<FiniteMetricSpace>;

/// A finite metric space: labelled points and an exact pairwise distance
/// matrix. All topology downstream of this type is derived from the matrix.
#[derive(Clone)]
pub struct FiniteMetricSpace {
    name: String,
    labels: Vec<String>,
    dist: Vec<Scalar>, // row-major n*n
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("space `{0}` has no points")]
    Empty(String),
    #[error("distance matrix of `{name}` is {rows}x{cols}, expected {n}x{n}")]
    NotSquare {
        name: String,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("d({a},{a}) = {value}, expected 0")]
    NonzeroDiagonal { a: String, value: Scalar },
    #[error("asymmetry: d({a},{b}) = {ab} but d({b},{a}) = {ba}")]
    Asymmetric {
        a: String,
        b: String,
        ab: Scalar,
        ba: Scalar,
    },
    #[error("d({a},{b}) = {value}, expected positive for distinct points")]
    NonpositiveOffDiagonal { a: String, b: String, value: Scalar },
    #[error("triangle inequality violated by ({a},{b},{c}): d({a},{c}) = {ac} > {ab} + {bc} = d({a},{b}) + d({b},{c})")]
    TriangleViolation {
        a: String,
        b: String,
        c: String,
        ac: Scalar,
        ab: Scalar,
        bc: Scalar,
    },
    #[error("cycle needs at least 3 points, got {0}")]
    CycleTooSmall(usize),
    #[error("grid dimensions must be positive, got {0}x{1}")]
    BadGridDims(i64, i64),
    #[error("hole {0:?} overlaps another hole or touches the grid boundary")]
    BadHole(Rect),
    #[error("removing the holes disconnects the grid")]
    DisconnectedGrid,
    #[error("subspace selection is empty")]
    EmptySubset,
    #[error("point index {index} out of range for space `{space}` ({n} points)")]
    IndexOutOfRange {
        space: String,
        index: usize,
        n: usize,
    },
}

impl FiniteMetricSpace {
    /// Validates every metric axiom; triangle violations name the offending
    /// triple.
    pub fn build(
        name: impl Into<String>,
        labels: Vec<String>,
        matrix: Vec<Vec<Scalar>>,
    ) -> Result<SpaceRef, SpaceError> {
        let name = name.into();
        let n = labels.len();
        if n == 0 {
            return Err(SpaceError::Empty(name));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(SpaceError::DuplicateLabel(w[0].clone()));
                }
            }
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(SpaceError::NotSquare {
                name,
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                n,
            });
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in &matrix {
            dist.extend_from_slice(row);
        }
        let space = FiniteMetricSpace { name, labels, dist };
        space.validate()?;
        Ok(Arc::new(space))
    }

    fn validate(&self) -> Result<(), SpaceError> {
        let n = self.len();
        for i in 0..n {
            if !self.d(i, i).is_zero() {
                return Err(SpaceError::NonzeroDiagonal {
                    a: self.labels[i].clone(),
                    value: self.d(i, i),
                });
            }
            for j in (i + 1)..n {
                if self.d(i, j) != self.d(j, i) {
                    return Err(SpaceError::Asymmetric {
                        a: self.labels[i].clone(),
                        b: self.labels[j].clone(),
                        ab: self.d(i, j),
                        ba: self.d(j, i),
                    });
                }
                if self.d(i, j) <= Scalar::zero() {
                    return Err(SpaceError::NonpositiveOffDiagonal {
                        a: self.labels[i].clone(),
                        b: self.labels[j].clone(),
                        value: self.d(i, j),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) {
                        return Err(SpaceError::TriangleViolation {
                            a: self.labels[i].clone(),
                            b: self.labels[j].clone(),
                            c: self.labels[k].clone(),
                            ac: self.d(i, k),
                            ab: self.d(i, j),
                            bc: self.d(j, k),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Scalar {
        self.dist[i * self.len() + j]
    }

    pub fn diameter(&self) -> Scalar {
        let n = self.len();
        let mut best = Scalar::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max(self.d(i, j));
            }
        }
        best
    }

    /// Smallest positive distance; `None` for a single point.
    pub fn min_positive_distance(&self) -> Option<Scalar> {
        let n = self.len();
        let mut best: Option<Scalar> = None;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.d(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    pub fn matrix(&self) -> Vec<Vec<Scalar>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.d(i, j)).collect())
            .collect()
    }
}

impl PartialEq for FiniteMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}
impl Eq for FiniteMetricSpace {}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMetricSpace({}, {} points)", self.name, self.len())
    }
}

/// Two spaces are interchangeable when they have identical labels and
/// matrices; pointer equality is the cheap common case.
pub fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Points 0..=m with d(a,b) = |a-b|.
pub fn interval(m: usize) -> SpaceRef {
    let labels: Vec<String> = (0..=m).map(|i| i.to_string()).collect();
    let n = m + 1;
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = Scalar::from_int((i as i64 - j as i64).abs());
        }
    }
    Arc::new(FiniteMetricSpace {
        name: format!("interval({m})"),
        labels,
        dist,
    })
}

/// Points 0..n-1 with unit-edge geodesic metric d(i,j) = min(|i-j|, n-|i-j|).
pub fn cycle_geodesic(n: usize) -> Result<SpaceRef, SpaceError> {
    if n < 3 {
        return Err(SpaceError::CycleTooSmall(n));
    }
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let a = (i as i64 - j as i64).unsigned_abs() as usize;
            let d = a.min(n - a);
            dist[i * n + j] = Scalar::from_int(d as i64);
        }
    }
    Ok(Arc::new(FiniteMetricSpace {
        name: format!("cycle({n})"),
        labels,
        dist,
    }))
}

/// Points 0..n-1 on the unit circle with chord distances 2 sin(pi |i-j| / n),
/// rounded to rationals with denominator 10^6 and then repaired by min-plus
/// closure so the rounding cannot break the triangle inequality.
pub fn cycle_chord(n: usize) -> Result<SpaceRef, SpaceError> {
    if n < 3 {
        return Err(SpaceError::CycleTooSmall(n));
    }
    const DEN: i128 = 1_000_000;
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = (i as i64 - j as i64).unsigned_abs() as usize;
            let a = a.min(n - a);
            let chord = 2.0 * (std::f64::consts::PI * a as f64 / n as f64).sin();
            let numer = (chord * DEN as f64).round() as i128;
            dist[i * n + j] = Scalar::new(numer.max(1), DEN).expect("nonzero denominator");
        }
    }
    min_plus_closure(n, &mut dist);
    let space = FiniteMetricSpace {
        name: format!("cycle-chord({n})"),
        labels,
        dist,
    };
    space.validate()?;
    Ok(Arc::new(space))
}

/// Floyd-Warshall closure; turns any symmetric positive matrix into a metric.
pub fn min_plus_closure(n: usize, dist: &mut [Scalar]) {
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i * n + k] + dist[k * n + j];
                if via < dist[i * n + j] {
                    dist[i * n + j] = via;
                }
            }
        }
    }
}

/// Inclusive cell rectangle used for grid holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Rect {
    pub fn contains(&self, x: i64, y: i64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    fn normalized(&self) -> Rect {
        Rect {
            x0: self.x0.min(self.x1),
            y0: self.y0.min(self.y1),
            x1: self.x0.max(self.x1),
            y1: self.y0.max(self.y1),
        }
    }

    fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }
}

/// Cell coordinates of a generated grid space, kept so callers can trace
/// paths geometrically.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub width: i64,
    pub height: i64,
    pub holes: Vec<Rect>,
    pub cells: Vec<(i64, i64)>,
    pub index: BTreeMap<(i64, i64), usize>,
}

impl GridGeometry {
    pub fn cell_index(&self, x: i64, y: i64) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }
}

/// Full w x h grid with the 4-neighbor shortest-path metric scaled by `unit`.
pub fn grid(w: i64, h: i64, unit: Scalar) -> Result<(SpaceRef, GridGeometry), SpaceError> {
    grid_with_holes("grid", w, h, &[], unit)
}

/// Grid minus two rectangular hole regions; metric is the shortest-path
/// distance in the 4-neighbor unit grid graph restricted to remaining cells.
pub fn two_hole_grid(
    w: i64,
    h: i64,
    hole0: Rect,
    hole1: Rect,
) -> Result<(SpaceRef, GridGeometry), SpaceError> {
    let a = hole0.normalized();
    let b = hole1.normalized();
    for hole in [&a, &b] {
        // Interior only: a hole touching the boundary would change the story
        // from holes to bays.
        if hole.x0 <= 0 || hole.y0 <= 0 || hole.x1 >= w - 1 || hole.y1 >= h - 1 {
            return Err(SpaceError::BadHole(*hole));
        }
    }
    if a.intersects(&b) {
        return Err(SpaceError::BadHole(b));
    }
    grid_with_holes("two-hole-grid", w, h, &[a, b], Scalar::one())
}

fn grid_with_holes(
    name: &str,
    w: i64,
    h: i64,
    holes: &[Rect],
    unit: Scalar,
) -> Result<(SpaceRef, GridGeometry), SpaceError> {
    if w <= 0 || h <= 0 {
        return Err(SpaceError::BadGridDims(w, h));
    }
    let mut cells = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !holes.iter().any(|r| r.contains(x, y)) {
                cells.push((x, y));
            }
        }
    }
    if cells.is_empty() {
        return Err(SpaceError::Empty(name.to_string()));
    }
    let index: BTreeMap<(i64, i64), usize> =
        cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let n = cells.len();
    let mut dist = vec![Scalar::zero(); n * n];
    let mut hops = vec![usize::MAX; n];
    for start in 0..n {
        hops.iter_mut().for_each(|x| *x = usize::MAX);
        hops[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            let (x, y) = cells[cur];
            for (nx, ny) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if let Some(&ni) = index.get(&(nx, ny)) {
                    if hops[ni] == usize::MAX {
                        hops[ni] = hops[cur] + 1;
                        queue.push_back(ni);
                    }
                }
            }
        }
        for (target, &steps) in hops.iter().enumerate() {
            if steps == usize::MAX {
                return Err(SpaceError::DisconnectedGrid);
            }
            dist[start * n + target] = Scalar::from_int(steps as i64) * unit;
        }
    }
    let labels = cells.iter().map(|(x, y)| format!("({x},{y})")).collect();
    let space = Arc::new(FiniteMetricSpace {
        name: format!("{name}({w}x{h})"),
        labels,
        dist,
    });
    let geometry = GridGeometry {
        width: w,
        height: h,
        holes: holes.to_vec(),
        cells,
        index,
    };
    Ok((space, geometry))
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ProductMetric {
    L1,
    Max,
}

impl fmt::Display for ProductMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductMetric::L1 => f.write_str("l1"),
            ProductMetric::Max => f.write_str("max"),
        }
    }
}

/// A product space together with its factor structure. Index convention:
/// (i, j) -> i * right.len() + j.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    pub space: SpaceRef,
    pub left: SpaceRef,
    pub right: SpaceRef,
    pub metric: ProductMetric,
}

impl ProductSpace {
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.right.len() + j
    }

    pub fn components(&self, k: usize) -> (usize, usize) {
        (k / self.right.len(), k % self.right.len())
    }
}

pub fn product(a: &SpaceRef, b: &SpaceRef, metric: ProductMetric) -> ProductSpace {
    let na = a.len();
    let nb = b.len();
    let n = na * nb;
    let mut labels = Vec::with_capacity(n);
    let mut dist = vec![Scalar::zero(); n * n];
    for i in 0..na {
        for j in 0..nb {
            labels.push(format!("({},{})", a.label(i), b.label(j)));
        }
    }
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let da = a.d(i1, i2);
                    let db = b.d(j1, j2);
                    let d = match metric {
                        ProductMetric::L1 => da + db,
                        ProductMetric::Max => da.max(db),
                    };
                    dist[(i1 * nb + j1) * n + (i2 * nb + j2)] = d;
                }
            }
        }
    }
    let space = Arc::new(FiniteMetricSpace {
        name: format!("{}x{}[{}]", a.name(), b.name(), metric),
        labels,
        dist,
    });
    ProductSpace {
        space,
        left: Arc::clone(a),
        right: Arc::clone(b),
        metric,
    }
}

pub fn product_l1(a: &SpaceRef, b: &SpaceRef) -> ProductSpace {
    product(a, b, ProductMetric::L1)
}

// ---------------------------------------------------------------------------
// Subspaces and subsets
// ---------------------------------------------------------------------------

/// A sorted, deduplicated selection of points of a space.
#[derive(Clone)]
pub struct PointSubset {
    pub space: SpaceRef,
    pub indices: Vec<usize>,
}

impl PointSubset {
    pub fn new(space: &SpaceRef, mut indices: Vec<usize>) -> Result<Self, SpaceError> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(SpaceError::EmptySubset);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= space.len()) {
            return Err(SpaceError::IndexOutOfRange {
                space: space.name().to_string(),
                index: bad,
                n: space.len(),
            });
        }
        Ok(PointSubset {
            space: Arc::clone(space),
            indices,
        })
    }

    pub fn full(space: &SpaceRef) -> Self {
        PointSubset {
            space: Arc::clone(space),
            indices: (0..space.len()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.space.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.indices
            .iter()
            .map(|&i| self.space.label(i).to_string())
            .collect()
    }
}

impl fmt::Debug for PointSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(","))
    }
}

/// Induced metric on a subset; labels are preserved, distances are not
/// re-shortest-pathed.
pub fn subspace(space: &SpaceRef, subset: &PointSubset) -> Result<SpaceRef, SpaceError> {
    if subset.is_empty() {
        return Err(SpaceError::EmptySubset);
    }
    if subset.is_full() {
        return Ok(Arc::clone(space));
    }
    let k = subset.len();
    let labels = subset.labels();
    let mut dist = vec![Scalar::zero(); k * k];
    for (a, &i) in subset.indices.iter().enumerate() {
        for (b, &j) in subset.indices.iter().enumerate() {
            dist[a * k + b] = space.d(i, j);
        }
    }
    Ok(Arc::new(FiniteMetricSpace {
        name: format!("{}|{:?}", space.name(), subset),
        labels,
        dist,
    }))
}

// ---------------------------------------------------------------------------
// r-connectivity
// ---------------------------------------------------------------------------

/// A point sequence with consecutive distances at most r.
#[derive(Clone, Debug)]
pub struct RPath {
    pub space: SpaceRef,
    pub points: Vec<usize>,
}

impl RPath {
    pub fn check(&self, r: Scalar) -> Result<(), (usize, Scalar)> {
        for (i, w) in self.points.windows(2).enumerate() {
            let d = self.space.d(w[0], w[1]);
            if d > r {
                return Err((i, d));
            }
        }
        Ok(())
    }
}

/// Components of the graph with edges {d <= r}; the space is r-connected iff
/// there is a single component. Components are listed by smallest member.
pub fn r_components(space: &SpaceRef, r: Scalar) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![start];
        component[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for next in 0..n {
                if component[next] == usize::MAX && space.d(cur, next) <= r {
                    component[next] = id;
                    members.push(next);
                    queue.push_back(next);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}

pub fn is_r_connected(space: &SpaceRef, r: Scalar) -> (bool, Vec<Vec<usize>>) {
    let components = r_components(space, r);
    (components.len() == 1, components)
}

/// Shortest r-path between two points (BFS over the {d <= r} graph), or
/// `None` when they lie in different r-components.
pub fn shortest_r_path(space: &SpaceRef, r: Scalar, from: usize, to: usize) -> Option<RPath> {
    let n = space.len();
    let mut parent = vec![usize::MAX; n];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(cur) = queue.pop_front() {
        if cur == to {
            let mut points = vec![to];
            let mut at = to;
            while at != from {
                at = parent[at];
                points.push(at);
            }
            points.reverse();
            return Some(RPath {
                space: Arc::clone(space),
                points,
            });
        }
        for next in 0..n {
            if parent[next] == usize::MAX && space.d(cur, next) <= r {
                parent[next] = cur;
                queue.push_back(next);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    #[test]
    fn builds_two_point_space() {
        let space = FiniteMetricSpace::build(
            "pair",
            vec!["a".into(), "b".into()],
            vec![vec![s("0"), s("1")], vec![s("1"), s("0")]],
        )
        .unwrap();
        assert_eq!(space.len(), 2);
        assert_eq!(space.d(0, 1), s("1"));
    }

    #[test]
    fn triangle_violation_names_the_triple() {
        let err = FiniteMetricSpace::build(
            "bad",
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![s("0"), s("1"), s("5")],
                vec![s("1"), s("0"), s("1")],
                vec![s("5"), s("1"), s("0")],
            ],
        )
        .unwrap_err();
        match err {
            SpaceError::TriangleViolation { a, b, c, .. } => {
                assert_eq!((a.as_str(), b.as_str(), c.as_str()), ("a", "b", "c"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn interval_distances() {
        let x = interval(3);
        assert_eq!(x.d(0, 3), s("3"));
        let nine = interval(9);
        assert_eq!(nine.len(), 10);
        assert_eq!(nine.diameter(), s("9"));
    }

    #[test]
    fn cycle_geodesic_antipodal() {
        let c4 = cycle_geodesic(4).unwrap();
        assert_eq!(c4.d(0, 2), s("2"));
        assert_eq!(c4.d(1, 3), s("2"));
        assert!(matches!(cycle_geodesic(2), Err(SpaceError::CycleTooSmall(2))));
    }

    #[test]
    fn cycle_chord_is_a_metric_and_close_to_chords() {
        let c = cycle_chord(24).unwrap();
        // adjacent chord on C24 is 2 sin(pi/24) ~ 0.2611
        let adj = c.d(0, 1).to_f64();
        assert!((adj - 0.261052).abs() < 1e-4);
        let anti = c.d(0, 12).to_f64();
        assert!((anti - 2.0).abs() < 1e-4);
    }

    #[test]
    fn product_l1_examples() {
        let one = interval(0);
        let p = product_l1(&one, &one);
        assert_eq!(p.space.len(), 1);

        let unit = interval(1);
        let square = product_l1(&unit, &unit);
        let a = square.pair_index(0, 0);
        let b = square.pair_index(1, 1);
        assert_eq!(square.space.d(a, b), s("2"));

        let c4 = cycle_geodesic(4).unwrap();
        let t = product_l1(&c4, &c4);
        let x = t.pair_index(0, 1);
        let y = t.pair_index(2, 3);
        assert_eq!(t.space.d(x, y), s("4"));
    }

    #[test]
    fn product_max_uses_the_larger_coordinate_gap() {
        let c4 = cycle_geodesic(4).unwrap();
        let t = product(&c4, &c4, ProductMetric::Max);
        let x = t.pair_index(0, 1);
        let y = t.pair_index(2, 3);
        assert_eq!(t.space.d(x, y), s("2"));
    }

    #[test]
    fn subspace_examples() {
        let c6 = cycle_geodesic(6).unwrap();
        let full = subspace(&c6, &PointSubset::full(&c6)).unwrap();
        assert!(same_space(&c6, &full));

        let single = subspace(&c6, &PointSubset::new(&c6, vec![2]).unwrap()).unwrap();
        assert_eq!(single.len(), 1);

        let arc = subspace(&c6, &PointSubset::new(&c6, vec![0, 1, 2]).unwrap()).unwrap();
        // induced metric, not re-shortest-pathed
        assert_eq!(arc.d(0, 2), s("2"));
        assert_eq!(arc.label(2), "2");
    }

    #[test]
    fn empty_subset_rejected() {
        let c6 = cycle_geodesic(6).unwrap();
        assert!(matches!(
            PointSubset::new(&c6, vec![]),
            Err(SpaceError::EmptySubset)
        ));
    }

    #[test]
    fn two_hole_grid_validation_and_connectivity() {
        let hole0 = Rect { x0: 2, y0: 2, x1: 3, y1: 3 };
        let hole1 = Rect { x0: 6, y0: 2, x1: 8, y1: 4 };
        let (space, geom) = two_hole_grid(12, 7, hole0, hole1).unwrap();
        assert_eq!(space.len(), (12 * 7 - 4 - 9) as usize);
        assert_eq!(geom.holes.len(), 2);
        let (connected, _) = is_r_connected(&space, s("1"));
        assert!(connected);

        // touching the boundary is rejected
        let bad = Rect { x0: 0, y0: 2, x1: 1, y1: 3 };
        assert!(two_hole_grid(12, 7, bad, hole1).is_err());
        // overlapping holes are rejected
        let overlap = Rect { x0: 3, y0: 3, x1: 6, y1: 4 };
        assert!(two_hole_grid(12, 7, hole0, overlap).is_err());
    }

    #[test]
    fn grid_metric_walks_around_holes() {
        let hole0 = Rect { x0: 2, y0: 1, x1: 2, y1: 3 };
        let hole1 = Rect { x0: 5, y0: 1, x1: 5, y1: 3 };
        let (space, geom) = two_hole_grid(8, 5, hole0, hole1).unwrap();
        let a = geom.cell_index(1, 2).unwrap();
        let b = geom.cell_index(3, 2).unwrap();
        // straight-line distance is 2 but the hole column forces a detour
        // over the top or bottom row
        assert_eq!(space.d(a, b), s("6"));
    }

    #[test]
    fn r_connectivity_examples_and_monotonicity() {
        let c6 = cycle_geodesic(6).unwrap();
        assert!(is_r_connected(&c6, s("1")).0);

        let pair = FiniteMetricSpace::build(
            "pair",
            vec!["a".into(), "b".into()],
            vec![vec![s("0"), s("1")], vec![s("1"), s("0")]],
        )
        .unwrap();
        let (connected, components) = is_r_connected(&pair, s("1/2"));
        assert!(!connected);
        assert_eq!(components.len(), 2);

        // monotone in r on a handful of spaces
        for space in [c6, pair, interval(4)] {
            let rs = ["1/2", "1", "2", "3"];
            let mut last_connected = false;
            for r in rs {
                let now = is_r_connected(&space, s(r)).0;
                assert!(!last_connected || now, "connectivity lost as r grew");
                last_connected = now;
            }
        }
    }

    #[test]
    fn shortest_r_path_is_an_r_path() {
        let c6 = cycle_geodesic(6).unwrap();
        let p = shortest_r_path(&c6, s("1"), 0, 3).unwrap();
        assert_eq!(p.points.len(), 4);
        assert!(p.check(s("1")).is_ok());
        assert!(shortest_r_path(&c6, s("1/2"), 0, 3).is_none());
    }
}
