//! Discrete homotopies as frame sequences, and the verifier that makes them
//! certificates.
//!
//! A homotopy between maps f, g : U -> Y at scales (s, r) is a sequence of
//! frames F_0 .. F_m with F_0 = f, F_m = g, every frame s-Lipschitz, and
//! every per-point step d(F_i(x), F_{i+1}(x)) <= r. Checking only consecutive
//! steps suffices for the time direction: gaps over |i - j| steps follow by
//! the triangle inequality.

use std::fmt;

use thiserror::Error;

use crate::maps::{restrict, LipschitzMap, MapError, ScaleParams};
use crate::scalar::Scalar;
use crate::space::{same_space, PointSubset};

#[derive(Clone)]
pub struct Homotopy {
    pub frames: Vec<LipschitzMap>,
    pub params: ScaleParams,
}

#[derive(Debug, Error, Clone)]
pub enum HomotopyError {
    #[error("homotopy has no frames")]
    NoFrames,
    #[error("frame {index} does not share the common domain/codomain")]
    FrameSpaceMismatch { index: usize },
    #[error("endpoint maps live on different spaces than the frames")]
    EndpointSpaceMismatch,
    #[error("cannot concatenate: first homotopy ends at a different map than the second starts")]
    SeamMismatch,
    #[error("cannot concatenate homotopies with different scale parameters ({0} vs {1})")]
    ParamsMismatch(ScaleParams, ScaleParams),
    #[error("target length {target} is shorter than the current length {current}")]
    ExtendShrinks { target: usize, current: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// One failed inequality, naming the frame, point(s), and values involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FrameNotLipschitz {
        frame: usize,
        x1: usize,
        x2: usize,
        image_gap: Scalar,
        allowed: Scalar,
    },
    StepTooLong {
        step: usize,
        point: usize,
        gap: Scalar,
        r: Scalar,
    },
    StartMismatch {
        point: usize,
    },
    EndMismatch {
        point: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FrameNotLipschitz {
                frame,
                x1,
                x2,
                image_gap,
                allowed,
            } => write!(
                f,
                "frame {frame} not s-Lipschitz at pair ({x1},{x2}): gap {image_gap} > {allowed}"
            ),
            Violation::StepTooLong {
                step,
                point,
                gap,
                r,
            } => write!(f, "step {step} moves point {point} by {gap} > r = {r}"),
            Violation::StartMismatch { point } => {
                write!(f, "first frame differs from f at point {point}")
            }
            Violation::EndMismatch { point } => {
                write!(f, "last frame differs from g at point {point}")
            }
        }
    }
}

impl Homotopy {
    /// Number of time steps m (frame count minus one).
    pub fn length(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn first(&self) -> &LipschitzMap {
        self.frames.first().expect("homotopy has frames")
    }

    pub fn last(&self) -> &LipschitzMap {
        self.frames.last().expect("homotopy has frames")
    }

    /// Shape check: nonempty, all frames on one domain/codomain pair.
    fn check_shape(&self) -> Result<(), HomotopyError> {
        let first = self.frames.first().ok_or(HomotopyError::NoFrames)?;
        for (index, frame) in self.frames.iter().enumerate().skip(1) {
            if !same_space(&frame.domain, &first.domain)
                || !same_space(&frame.codomain, &first.codomain)
            {
                return Err(HomotopyError::FrameSpaceMismatch { index });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Homotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Homotopy{} with {} steps on {}",
            self.params,
            self.length(),
            self.first().domain.name()
        )
    }
}

/// Checks all three homotopy conditions against the claimed endpoints.
/// Returns every violation found, so failures localize.
pub fn verify_homotopy(
    h: &Homotopy,
    f: &LipschitzMap,
    g: &LipschitzMap,
) -> Result<Vec<Violation>, HomotopyError> {
    h.check_shape()?;
    let first = h.first();
    if !same_space(&f.domain, &first.domain)
        || !same_space(&f.codomain, &first.codomain)
        || !same_space(&g.domain, &first.domain)
        || !same_space(&g.codomain, &first.codomain)
    {
        return Err(HomotopyError::EndpointSpaceMismatch);
    }

    let mut violations = Vec::new();
    let n = first.domain.len();
    let codomain = &first.codomain;

    for x in 0..n {
        if h.first().apply(x) != f.apply(x) {
            violations.push(Violation::StartMismatch { point: x });
        }
        if h.last().apply(x) != g.apply(x) {
            violations.push(Violation::EndMismatch { point: x });
        }
    }
    for (index, frame) in h.frames.iter().enumerate() {
        if let Err(v) = frame.is_s_lipschitz(h.params.s) {
            violations.push(Violation::FrameNotLipschitz {
                frame: index,
                x1: v.x1,
                x2: v.x2,
                image_gap: v.image_gap,
                allowed: v.allowed,
            });
        }
    }
    for (step, pair) in h.frames.windows(2).enumerate() {
        for x in 0..n {
            let gap = codomain.d(pair[0].apply(x), pair[1].apply(x));
            if gap > h.params.r {
                violations.push(Violation::StepTooLong {
                    step,
                    point: x,
                    gap,
                    r: h.params.r,
                });
            }
        }
    }
    Ok(violations)
}

/// Convenience wrapper: true iff `verify_homotopy` reports nothing.
pub fn is_valid_homotopy(h: &Homotopy, f: &LipschitzMap, g: &LipschitzMap) -> bool {
    matches!(verify_homotopy(h, f, g), Ok(v) if v.is_empty())
}

/// Glues h1 : f ~ g and h2 : g ~ h into f ~ h of length n + m. The seam is
/// sound because the shared frame makes the cross-seam time gaps telescope.
pub fn concatenate(h1: &Homotopy, h2: &Homotopy) -> Result<Homotopy, HomotopyError> {
    if h1.params != h2.params {
        return Err(HomotopyError::ParamsMismatch(h1.params, h2.params));
    }
    h1.check_shape()?;
    h2.check_shape()?;
    if h1.last() != h2.first() {
        return Err(HomotopyError::SeamMismatch);
    }
    let mut frames = h1.frames.clone();
    frames.extend(h2.frames.iter().skip(1).cloned());
    Ok(Homotopy {
        frames,
        params: h1.params,
    })
}

/// Pads to the target length by repeating the final frame (zero-gap steps).
pub fn extend(h: &Homotopy, m_target: usize) -> Result<Homotopy, HomotopyError> {
    let current = h.length();
    if m_target < current {
        return Err(HomotopyError::ExtendShrinks {
            target: m_target,
            current,
        });
    }
    let mut frames = h.frames.clone();
    let last = h.last().clone();
    frames.resize(m_target + 1, last);
    Ok(Homotopy {
        frames,
        params: h.params,
    })
}

/// Runs the homotopy backwards; valid because the step relation is symmetric.
pub fn reverse(h: &Homotopy) -> Homotopy {
    Homotopy {
        frames: h.frames.iter().rev().cloned().collect(),
        params: h.params,
    }
}

/// Restricts every frame to a subset of the domain. Restriction preserves
/// both homotopy conditions, which is what makes good subsets downward
/// closed.
pub fn restrict_homotopy(h: &Homotopy, subset: &PointSubset) -> Result<Homotopy, HomotopyError> {
    let frames = h
        .frames
        .iter()
        .map(|frame| restrict(frame, subset))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Homotopy {
        frames,
        params: h.params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::LipschitzMap;
    use crate::scalar::parse_scalar;
    use crate::space::{cycle_geodesic, PointSubset};

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    fn params(sv: &str, rv: &str) -> ScaleParams {
        ScaleParams::new(s(sv), s(rv)).unwrap()
    }

    #[test]
    fn single_frame_reflexivity() {
        let c4 = cycle_geodesic(4).unwrap();
        let f = LipschitzMap::identity(&c4);
        let h = Homotopy {
            frames: vec![f.clone()],
            params: params("1", "1"),
        };
        assert_eq!(h.length(), 0);
        assert!(is_valid_homotopy(&h, &f, &f));
    }

    #[test]
    fn folding_the_square_to_a_point() {
        let c4 = cycle_geodesic(4).unwrap();
        let id = LipschitzMap::identity(&c4);
        let fold = LipschitzMap::new(&c4, &c4, vec![0, 1, 1, 0]).unwrap();
        let constant = LipschitzMap::constant(&c4, &c4, 0).unwrap();
        let h = Homotopy {
            frames: vec![id.clone(), fold, constant.clone()],
            params: params("1", "1"),
        };
        assert!(is_valid_homotopy(&h, &id, &constant));
    }

    #[test]
    fn violations_name_the_failure() {
        let c4 = cycle_geodesic(4).unwrap();
        let id = LipschitzMap::identity(&c4);
        // frame (0,2,2,0) stretches the pair (0,1) to distance 2
        let bad_frame = LipschitzMap::new(&c4, &c4, vec![0, 2, 2, 0]).unwrap();
        let constant = LipschitzMap::constant(&c4, &c4, 0).unwrap();
        let h = Homotopy {
            frames: vec![id.clone(), bad_frame, constant.clone()],
            params: params("1", "1"),
        };
        let violations = verify_homotopy(&h, &id, &constant).unwrap();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::FrameNotLipschitz { frame: 1, .. })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::StepTooLong { .. })));
    }

    #[test]
    fn concatenation_adds_lengths() {
        let c4 = cycle_geodesic(4).unwrap();
        let id = LipschitzMap::identity(&c4);
        let fold = LipschitzMap::new(&c4, &c4, vec![0, 1, 1, 0]).unwrap();
        let constant = LipschitzMap::constant(&c4, &c4, 0).unwrap();
        let h1 = Homotopy {
            frames: vec![id.clone(), fold.clone(), constant.clone()],
            params: params("1", "1"),
        };
        let shift = LipschitzMap::constant(&c4, &c4, 1).unwrap();
        let shift2 = LipschitzMap::constant(&c4, &c4, 2).unwrap();
        let h2 = Homotopy {
            frames: vec![constant.clone(), shift, shift2.clone(), shift2.clone()],
            params: params("1", "1"),
        };
        let glued = concatenate(&h1, &h2).unwrap();
        assert_eq!(glued.length(), 2 + 3);
        assert!(is_valid_homotopy(&glued, &id, &shift2));

        // round trip through reverse gives f ~ f of doubled length
        let there_and_back = concatenate(&h1, &reverse(&h1)).unwrap();
        assert_eq!(there_and_back.length(), 4);
        assert!(is_valid_homotopy(&there_and_back, &id, &id));
    }

    #[test]
    fn extend_pads_with_the_last_frame() {
        let c4 = cycle_geodesic(4).unwrap();
        let f = LipschitzMap::identity(&c4);
        let h = Homotopy {
            frames: vec![f.clone()],
            params: params("1", "1"),
        };
        let padded = extend(&h, 3).unwrap();
        assert_eq!(padded.length(), 3);
        assert_eq!(padded.frames.len(), 4);
        assert!(is_valid_homotopy(&padded, &f, &f));

        let same = extend(&h, h.length()).unwrap();
        assert_eq!(same.length(), h.length());
        assert!(extend(&padded, 1).is_err());
    }

    #[test]
    fn restriction_of_a_witness_is_a_witness() {
        let c4 = cycle_geodesic(4).unwrap();
        let id = LipschitzMap::identity(&c4);
        let fold = LipschitzMap::new(&c4, &c4, vec![0, 1, 1, 0]).unwrap();
        let constant = LipschitzMap::constant(&c4, &c4, 0).unwrap();
        let h = Homotopy {
            frames: vec![id.clone(), fold, constant.clone()],
            params: params("1", "1"),
        };
        let u = PointSubset::new(&c4, vec![1, 3]).unwrap();
        let restricted = restrict_homotopy(&h, &u).unwrap();
        let fu = crate::maps::restrict(&id, &u).unwrap();
        let gu = crate::maps::restrict(&constant, &u).unwrap();
        assert!(is_valid_homotopy(&restricted, &fu, &gu));
    }
}
