//! Maps between finite metric spaces: Lipschitz constants, composition,
//! restriction, and the canonical projection/inclusion maps on products.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::space::{same_space, subspace, PointSubset, ProductSpace, SpaceError, SpaceRef};

/// A total function between two finite metric spaces, given pointwise.
#[derive(Clone)]
pub struct LipschitzMap {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    values: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("map has {got} values but the domain has {expected} points")]
    WrongArity { got: usize, expected: usize },
    #[error("value {value} out of range for codomain `{codomain}` ({n} points)")]
    ValueOutOfRange {
        value: usize,
        codomain: String,
        n: usize,
    },
    #[error("spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("base point index {0} out of range")]
    BasePointOutOfRange(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Witness that a map is not s-Lipschitz: a point pair whose image gap
/// exceeds s times their distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzViolation {
    pub x1: usize,
    pub x2: usize,
    pub image_gap: Scalar,
    pub allowed: Scalar,
}

impl LipschitzMap {
    pub fn new(
        domain: &SpaceRef,
        codomain: &SpaceRef,
        values: Vec<usize>,
    ) -> Result<Self, MapError> {
        if values.len() != domain.len() {
            return Err(MapError::WrongArity {
                got: values.len(),
                expected: domain.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(MapError::ValueOutOfRange {
                value: bad,
                codomain: codomain.name().to_string(),
                n: codomain.len(),
            });
        }
        Ok(LipschitzMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            values,
        })
    }

    pub fn identity(space: &SpaceRef) -> Self {
        LipschitzMap {
            domain: Arc::clone(space),
            codomain: Arc::clone(space),
            values: (0..space.len()).collect(),
        }
    }

    pub fn constant(domain: &SpaceRef, codomain: &SpaceRef, y0: usize) -> Result<Self, MapError> {
        if y0 >= codomain.len() {
            return Err(MapError::BasePointOutOfRange(y0));
        }
        Ok(LipschitzMap {
            domain: Arc::clone(domain),
            codomain: Arc::clone(codomain),
            values: vec![y0; domain.len()],
        })
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// max over pairs x1 != x2 of d(f x1, f x2) / d(x1, x2); 0 on a
    /// single-point domain.
    pub fn lipschitz_constant(&self) -> Scalar {
        let n = self.domain.len();
        let mut best = Scalar::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                let ratio = self
                    .codomain
                    .d(self.values[i], self.values[j])
                    .checked_div(self.domain.d(i, j))
                    .expect("distinct points have positive distance");
                best = best.max(ratio);
            }
        }
        best
    }

    /// Ok when every image gap is within s times the point distance;
    /// otherwise the argmax pair is returned.
    pub fn is_s_lipschitz(&self, s: Scalar) -> Result<(), LipschitzViolation> {
        let n = self.domain.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = self.codomain.d(self.values[i], self.values[j]);
                let allowed = s * self.domain.d(i, j);
                if gap > allowed {
                    return Err(LipschitzViolation {
                        x1: i,
                        x2: j,
                        image_gap: gap,
                        allowed,
                    });
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for LipschitzMap {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
            && same_space(&self.domain, &other.domain)
            && same_space(&self.codomain, &other.codomain)
    }
}
impl Eq for LipschitzMap {}

impl fmt::Debug for LipschitzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<&str> = self
            .values
            .iter()
            .map(|&v| self.codomain.label(v))
            .collect();
        write!(
            f,
            "{} -> {} [{}]",
            self.domain.name(),
            self.codomain.name(),
            images.join(",")
        )
    }
}

/// h after f; requires codomain(f) = domain(h).
pub fn compose(h: &LipschitzMap, f: &LipschitzMap) -> Result<LipschitzMap, MapError> {
    if !same_space(&f.codomain, &h.domain) {
        return Err(MapError::SpaceMismatch(format!(
            "codomain `{}` of the inner map is not the domain `{}` of the outer map",
            f.codomain.name(),
            h.domain.name()
        )));
    }
    Ok(LipschitzMap {
        domain: Arc::clone(&f.domain),
        codomain: Arc::clone(&h.codomain),
        values: f.values.iter().map(|&v| h.values[v]).collect(),
    })
}

/// Restriction to a subset; the domain becomes the induced subspace.
pub fn restrict(f: &LipschitzMap, subset: &PointSubset) -> Result<LipschitzMap, MapError> {
    if !same_space(&subset.space, &f.domain) {
        return Err(MapError::SpaceMismatch(format!(
            "subset lives in `{}`, map domain is `{}`",
            subset.space.name(),
            f.domain.name()
        )));
    }
    let domain = subspace(&f.domain, subset)?;
    Ok(LipschitzMap {
        domain,
        codomain: Arc::clone(&f.codomain),
        values: subset.indices.iter().map(|&i| f.values[i]).collect(),
    })
}

/// Scale pair (s, r); s bounds each frame, r bounds each time step.
#[derive(Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ScaleParams {
    pub s: Scalar,
    pub r: Scalar,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("scale parameters must be nonnegative, got s = {s}, r = {r}")]
pub struct NegativeScale {
    pub s: Scalar,
    pub r: Scalar,
}

impl ScaleParams {
    pub fn new(s: Scalar, r: Scalar) -> Result<Self, NegativeScale> {
        if s.is_negative() || r.is_negative() {
            return Err(NegativeScale { s, r });
        }
        Ok(ScaleParams { s, r })
    }
}

impl fmt::Debug for ScaleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, r={})", self.s, self.r)
    }
}

impl fmt::Display for ScaleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, r={})", self.s, self.r)
    }
}

// ---------------------------------------------------------------------------
// Canonical maps on products
// ---------------------------------------------------------------------------

/// (a, b) -> a
pub fn projection1(p: &ProductSpace) -> LipschitzMap {
    let values = (0..p.space.len()).map(|k| p.components(k).0).collect();
    LipschitzMap {
        domain: Arc::clone(&p.space),
        codomain: Arc::clone(&p.left),
        values,
    }
}

/// (a, b) -> b
pub fn projection2(p: &ProductSpace) -> LipschitzMap {
    let values = (0..p.space.len()).map(|k| p.components(k).1).collect();
    LipschitzMap {
        domain: Arc::clone(&p.space),
        codomain: Arc::clone(&p.right),
        values,
    }
}

/// x -> (x, b0)
pub fn axis1(p: &ProductSpace, b0: usize) -> Result<LipschitzMap, MapError> {
    if b0 >= p.right.len() {
        return Err(MapError::BasePointOutOfRange(b0));
    }
    let values = (0..p.left.len()).map(|i| p.pair_index(i, b0)).collect();
    Ok(LipschitzMap {
        domain: Arc::clone(&p.left),
        codomain: Arc::clone(&p.space),
        values,
    })
}

/// x -> (a0, x)
pub fn axis2(p: &ProductSpace, a0: usize) -> Result<LipschitzMap, MapError> {
    if a0 >= p.left.len() {
        return Err(MapError::BasePointOutOfRange(a0));
    }
    let values = (0..p.right.len()).map(|j| p.pair_index(a0, j)).collect();
    Ok(LipschitzMap {
        domain: Arc::clone(&p.right),
        codomain: Arc::clone(&p.space),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_scalar;
    use crate::space::{cycle_chord, cycle_geodesic, interval, product_l1};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    #[test]
    fn identity_and_constant_lipschitz_constants() {
        let c6 = cycle_geodesic(6).unwrap();
        assert_eq!(LipschitzMap::identity(&c6).lipschitz_constant(), s("1"));
        let one = interval(0);
        assert_eq!(LipschitzMap::identity(&one).lipschitz_constant(), s("0"));
        let c = LipschitzMap::constant(&c6, &c6, 3).unwrap();
        assert_eq!(c.lipschitz_constant(), s("0"));
    }

    #[test]
    fn squaring_on_the_chord_cycle_is_at_most_two_lipschitz() {
        let c = cycle_chord(24).unwrap();
        let values: Vec<usize> = (0..24).map(|j| (2 * j) % 24).collect();
        let f = LipschitzMap::new(&c, &c, values).unwrap();
        let bound = s("2") * (Scalar::one() + s("1/1000000"));
        assert!(f.lipschitz_constant() <= bound);
    }

    #[test]
    fn lipschitz_check_is_tight_at_the_constant() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::new(&c6, &c6, vec![0, 2, 2, 3, 4, 5]).unwrap();
        let lip = f.lipschitz_constant();
        assert!(f.is_s_lipschitz(lip).is_ok());
        let below = lip - s("1/1000");
        let violation = f.is_s_lipschitz(below).unwrap_err();
        assert_eq!(
            violation.image_gap,
            c6.d(f.apply(violation.x1), f.apply(violation.x2))
        );
    }

    #[test]
    fn compose_identity_and_constant() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::new(&c6, &c6, vec![1, 2, 3, 4, 5, 0]).unwrap();
        let id = LipschitzMap::identity(&c6);
        assert_eq!(compose(&id, &f).unwrap(), f);
        let c = LipschitzMap::constant(&c6, &c6, 2).unwrap();
        assert!(compose(&c, &f).unwrap().is_constant());
    }

    #[test]
    fn composition_lipschitz_bound_on_random_pairs() {
        let c6 = cycle_geodesic(6).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let f_vals: Vec<usize> = (0..6).map(|_| rng.gen_range(0..6)).collect();
            let g_vals: Vec<usize> = (0..6).map(|_| rng.gen_range(0..6)).collect();
            let f = LipschitzMap::new(&c6, &c6, f_vals).unwrap();
            let g = LipschitzMap::new(&c6, &c6, g_vals).unwrap();
            let gf = compose(&g, &f).unwrap();
            assert!(gf.lipschitz_constant() <= g.lipschitz_constant() * f.lipschitz_constant());
        }
    }

    #[test]
    fn restriction_examples_and_monotonicity() {
        let c6 = cycle_geodesic(6).unwrap();
        let f = LipschitzMap::new(&c6, &c6, vec![0, 1, 1, 2, 4, 5]).unwrap();
        let full = restrict(&f, &PointSubset::full(&c6)).unwrap();
        assert_eq!(full.values(), f.values());

        let single = restrict(&f, &PointSubset::new(&c6, vec![4]).unwrap()).unwrap();
        assert!(single.is_constant());
        assert_eq!(single.lipschitz_constant(), s("0"));

        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let vals: Vec<usize> = (0..6).map(|_| rng.gen_range(0..6)).collect();
            let f = LipschitzMap::new(&c6, &c6, vals).unwrap();
            let size = rng.gen_range(1..=6);
            let mut indices: Vec<usize> = (0..6).collect();
            for i in (1..6).rev() {
                indices.swap(i, rng.gen_range(0..=i));
            }
            indices.truncate(size);
            let u = PointSubset::new(&c6, indices).unwrap();
            let restricted = restrict(&f, &u).unwrap();
            assert!(restricted.lipschitz_constant() <= f.lipschitz_constant());
        }
    }

    #[test]
    fn canonical_product_maps() {
        let c6 = cycle_geodesic(6).unwrap();
        let p = product_l1(&c6, &c6);
        let p1 = projection1(&p);
        let p2 = projection2(&p);
        let i1 = axis1(&p, 0).unwrap();

        // p1 after i1 is the identity, p2 after i1 is constant
        assert_eq!(compose(&p1, &i1).unwrap(), LipschitzMap::identity(&c6));
        assert!(compose(&p2, &i1).unwrap().is_constant());

        assert_eq!(p1.lipschitz_constant(), s("1"));
        assert_eq!(p2.lipschitz_constant(), s("1"));
        assert_eq!(i1.lipschitz_constant(), s("1"));
    }

    #[test]
    fn scale_params_reject_negatives() {
        assert!(ScaleParams::new(s("-1"), s("1")).is_err());
        assert!(ScaleParams::new(s("0"), s("0")).is_ok());
    }
}
