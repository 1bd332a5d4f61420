//! Fréchet distance between a single segment and a polygonal chain.
//!
//! When one curve is a segment `a → b`, every chain vertex `p_k` can only be
//! matched to the parameter interval `[l_k, r_k]` of points on the segment
//! that lie within the threshold of `p_k` (a disc intersected with a line is
//! convex). The distance is at most the threshold iff the endpoints match and
//! a non-decreasing choice `t_1 ≤ … ≤ t_m` with `t_k ∈ [l_k, r_k]` exists,
//! which a single forward sweep decides.

use thiserror::Error;

use crate::model::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrechetError {
    #[error("chain has {0} point(s); at least two are required")]
    DegenerateChain(usize),
}

/// Bisection stops after this many halvings even if the band is still wide.
pub const MAX_BISECTION_STEPS: usize = 200;
/// Relative width of the final bisection band.
pub const BISECTION_REL_TOL: f64 = 1e-10;

/// Per-vertex parameter intervals on the query segment.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSpaceIntervals {
    intervals: Vec<Option<(f64, f64)>>,
}

impl FreeSpaceIntervals {
    pub fn compute(a: Point, b: Point, chain: &[Point], radius: f64) -> Self {
        FreeSpaceIntervals { intervals: chain.iter().map(|&p| disc_interval(a, b, p, radius)).collect() }
    }

    pub fn intervals(&self) -> &[Option<(f64, f64)>] {
        &self.intervals
    }

    /// Whether a non-decreasing parameter choice from `0` to `1` exists.
    pub fn admits_monotone_matching(&self) -> bool {
        let Some(Some((first_lo, _))) = self.intervals.first() else {
            return false;
        };
        let Some(Some((_, last_hi))) = self.intervals.last() else {
            return false;
        };
        if *first_lo > 0.0 || *last_hi < 1.0 {
            return false;
        }
        monotone_sweep(self.intervals.iter().copied())
    }
}

fn monotone_sweep(intervals: impl Iterator<Item = Option<(f64, f64)>>) -> bool {
    let mut reached = 0.0_f64;
    for iv in intervals {
        match iv {
            Some((lo, hi)) => {
                reached = reached.max(lo);
                if reached > hi {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

/// Parameters `s ∈ [0, 1]` with `‖a + s(b − a) − p‖ ≤ radius`, if any.
pub fn disc_interval(a: Point, b: Point, p: Point, radius: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let len2 = d.dot(d);
    let ap = p - a;
    if len2 == 0.0 {
        return (ap.norm() <= radius).then_some((0.0, 1.0));
    }
    let len = len2.sqrt();
    let h = d.cross(ap).abs() / len;
    if h > radius {
        return None;
    }
    let center = ap.dot(d) / len2;
    let half = (radius * radius - h * h).max(0.0).sqrt() / len;
    let lo = (center - half).max(0.0);
    let hi = (center + half).min(1.0);
    (lo <= hi).then_some((lo, hi))
}

/// Decides `d_F((a, b), chain) ≤ delta + eps`.
pub fn segment_chain_within(a: Point, b: Point, chain: &[Point], delta: f64, eps: f64) -> Result<bool, FrechetError> {
    if chain.len() < 2 {
        return Err(FrechetError::DegenerateChain(chain.len()));
    }
    let radius = delta + eps;
    if a.distance(chain[0]) > radius || b.distance(chain[chain.len() - 1]) > radius {
        return Ok(false);
    }
    Ok(monotone_sweep(chain.iter().map(|&p| disc_interval(a, b, p, radius))))
}

/// Fréchet distance between the segment `a → b` and `chain`, by bisection
/// over the decision procedure.
pub fn segment_chain_distance(a: Point, b: Point, chain: &[Point]) -> Result<f64, FrechetError> {
    if chain.len() < 2 {
        return Err(FrechetError::DegenerateChain(chain.len()));
    }
    let within = |r: f64| segment_chain_within(a, b, chain, r, 0.0).expect("length checked");
    if within(0.0) {
        return Ok(0.0);
    }
    // Matching every vertex to one of the segment endpoints is always feasible.
    let mut hi = chain.iter().map(|&p| p.distance(a).max(p.distance(b))).fold(0.0, f64::max);
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= BISECTION_REL_TOL * (1.0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if within(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
