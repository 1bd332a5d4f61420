//! Instance and solution data model.
//!
//! A [`PolylineBundle`] is a set of indexed bends plus polylines given as
//! sequences of bend indices. Polylines share a bend only when they reference
//! the same index; two bends with equal coordinates are still distinct.

use std::collections::BTreeSet;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frechet;

/// Index of a bend in [`PolylineBundle::bends`].
pub type BendId = usize;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("bend {0} has a non-finite coordinate")]
    NonFinite(BendId),
    #[error("polyline {polyline} references bend {index}, but only {n} bends exist")]
    BadIndex { polyline: usize, index: usize, n: usize },
    #[error("polyline {polyline} visits bend {bend} more than once")]
    RepeatedBend { polyline: usize, bend: BendId },
    #[error("polyline {polyline} has fewer than two bends")]
    ShortPolyline { polyline: usize },
    #[error("bend {0} is not used by any polyline")]
    IsolatedBend(BendId),
    #[error("retained set misses endpoint {bend} of polyline {polyline}")]
    MissingEndpoint { polyline: usize, bend: BendId },
    #[error("retained bend {0} is out of range")]
    OutOfRange(BendId),
    #[error("invalid tolerance: delta = {delta}, eps = {eps}")]
    BadTolerance { delta: f64, eps: f64 },
    #[error("relaxation factor {0} must be a finite number >= 1")]
    BadFactor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Euclidean distance from `self` to the closed segment `a`–`b`.
    pub fn distance_to_segment(self, a: Point, b: Point) -> f64 {
        let d = b - a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return self.distance(a);
        }
        let s = ((self - a).dot(d) / len2).clamp(0.0, 1.0);
        self.distance(a + d * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// A validated polyline bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct PolylineBundle {
    bends: Vec<Point>,
    polylines: Vec<Vec<BendId>>,
    /// For every bend, the `(polyline, position)` pairs at which it occurs.
    occurrences: Vec<Vec<(usize, usize)>>,
}

impl PolylineBundle {
    pub fn new(bends: Vec<Point>, polylines: Vec<Vec<BendId>>) -> Result<Self, ModelError> {
        if let Some(i) = bends.iter().position(|p| !p.is_finite()) {
            return Err(ModelError::NonFinite(i));
        }
        let n = bends.len();
        let mut occurrences = vec![Vec::new(); n];
        for (pid, line) in polylines.iter().enumerate() {
            if line.len() < 2 {
                return Err(ModelError::ShortPolyline { polyline: pid });
            }
            for (pos, &b) in line.iter().enumerate() {
                if b >= n {
                    return Err(ModelError::BadIndex { polyline: pid, index: b, n });
                }
                if occurrences[b].last().is_some_and(|&(p, _)| p == pid) {
                    return Err(ModelError::RepeatedBend { polyline: pid, bend: b });
                }
                occurrences[b].push((pid, pos));
            }
        }
        if let Some(b) = occurrences.iter().position(Vec::is_empty) {
            return Err(ModelError::IsolatedBend(b));
        }
        Ok(PolylineBundle { bends, polylines, occurrences })
    }

    pub fn bends(&self) -> &[Point] {
        &self.bends
    }

    pub fn bend(&self, b: BendId) -> Point {
        self.bends[b]
    }

    pub fn polylines(&self) -> &[Vec<BendId>] {
        &self.polylines
    }

    pub fn polyline(&self, pid: usize) -> &[BendId] {
        &self.polylines[pid]
    }

    /// Number of bends `n`.
    pub fn num_bends(&self) -> usize {
        self.bends.len()
    }

    /// Number of polylines `ℓ`.
    pub fn num_polylines(&self) -> usize {
        self.polylines.len()
    }

    /// `(polyline, position)` pairs at which `b` occurs, ordered by polyline.
    pub fn occurrences(&self, b: BendId) -> &[(usize, usize)] {
        &self.occurrences[b]
    }

    pub fn position_in(&self, pid: usize, b: BendId) -> Option<usize> {
        self.occurrences[b].iter().find(|&&(p, _)| p == pid).map(|&(_, pos)| pos)
    }

    /// Coordinates of the polyline `pid` between two positions, inclusive.
    pub fn chain(&self, pid: usize, from: usize, to: usize) -> Vec<Point> {
        self.polylines[pid][from..=to].iter().map(|&b| self.bends[b]).collect()
    }

    pub fn coordinates(&self, pid: usize) -> Vec<Point> {
        self.polylines[pid].iter().map(|&b| self.bends[b]).collect()
    }

    /// First and last bend of every polyline.
    pub fn endpoints(&self) -> BTreeSet<BendId> {
        self.polylines.iter().flat_map(|l| [l[0], l[l.len() - 1]]).collect()
    }

    /// Bends occurring in at least two polylines.
    pub fn shared_bends(&self) -> BTreeSet<BendId> {
        (0..self.bends.len()).filter(|&b| self.occurrences[b].len() >= 2).collect()
    }
}

/// Distance threshold plus the slack used for every `<=` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub delta: f64,
    pub eps: f64,
}

impl ToleranceSpec {
    pub const DEFAULT_RELATIVE_EPS: f64 = 1e-9;

    pub fn new(delta: f64) -> Result<Self, ModelError> {
        Self::with_eps(delta, Self::DEFAULT_RELATIVE_EPS * delta)
    }

    pub fn with_eps(delta: f64, eps: f64) -> Result<Self, ModelError> {
        let ok = delta.is_finite() && eps.is_finite() && delta > 0.0 && eps >= 0.0 && eps < delta;
        if ok {
            Ok(ToleranceSpec { delta, eps })
        } else {
            Err(ModelError::BadTolerance { delta, eps })
        }
    }

    /// The same slack applied to a threshold scaled by `factor`.
    pub fn scaled(self, factor: f64) -> ToleranceSpec {
        ToleranceSpec { delta: self.delta * factor, eps: self.eps }
    }
}

/// A retained-bend set `B*` known to contain every polyline endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplification {
    retained: BTreeSet<BendId>,
}

impl Simplification {
    pub fn new(bundle: &PolylineBundle, retained: BTreeSet<BendId>) -> Result<Self, ModelError> {
        check_retained(bundle, &retained)?;
        Ok(Simplification { retained })
    }

    pub fn retained(&self) -> &BTreeSet<BendId> {
        &self.retained
    }

    pub fn into_retained(self) -> BTreeSet<BendId> {
        self.retained
    }

    pub fn len(&self) -> usize {
        self.retained.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained.is_empty()
    }
}

fn check_retained(bundle: &PolylineBundle, retained: &BTreeSet<BendId>) -> Result<(), ModelError> {
    if let Some(&b) = retained.iter().find(|&&b| b >= bundle.num_bends()) {
        return Err(ModelError::OutOfRange(b));
    }
    for (pid, line) in bundle.polylines().iter().enumerate() {
        for b in [line[0], line[line.len() - 1]] {
            if !retained.contains(&b) {
                return Err(ModelError::MissingEndpoint { polyline: pid, bend: b });
            }
        }
    }
    Ok(())
}

/// Positions (within each polyline) of the bends kept by `retained`.
pub fn induced_positions(bundle: &PolylineBundle, retained: &BTreeSet<BendId>) -> Result<Vec<Vec<usize>>, ModelError> {
    check_retained(bundle, retained)?;
    Ok(bundle
        .polylines()
        .iter()
        .map(|line| line.iter().enumerate().filter(|(_, b)| retained.contains(b)).map(|(pos, _)| pos).collect())
        .collect())
}

/// The induced simplification `S_i = L_i ∩ B*`, order preserved.
pub fn induced_simplification(
    bundle: &PolylineBundle,
    retained: &BTreeSet<BendId>,
) -> Result<Vec<Vec<BendId>>, ModelError> {
    check_retained(bundle, retained)?;
    Ok(bundle.polylines().iter().map(|line| line.iter().copied().filter(|b| retained.contains(b)).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub polyline: usize,
    /// Bend indices of the offending simplified segment.
    pub segment: (BendId, BendId),
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks every induced segment against `factor · delta` (plus `eps`).
pub fn validate_simplification(
    bundle: &PolylineBundle,
    tol: ToleranceSpec,
    retained: &BTreeSet<BendId>,
    factor: f64,
) -> Result<ValidationReport, ModelError> {
    if !(factor.is_finite() && factor >= 1.0) {
        return Err(ModelError::BadFactor(factor));
    }
    let positions = induced_positions(bundle, retained)?;
    let threshold = tol.delta * factor;
    let mut violations = Vec::new();
    for (pid, kept) in positions.iter().enumerate() {
        let line = bundle.polyline(pid);
        for w in kept.windows(2) {
            let (i, j) = (w[0], w[1]);
            let chain = bundle.chain(pid, i, j);
            let (a, b) = (chain[0], chain[chain.len() - 1]);
            let ok = frechet::segment_chain_within(a, b, &chain, threshold, tol.eps)
                .expect("induced chains have at least two points");
            if !ok {
                let distance =
                    frechet::segment_chain_distance(a, b, &chain).expect("induced chains have at least two points");
                violations.push(Violation { polyline: pid, segment: (line[i], line[j]), distance });
            }
        }
    }
    Ok(ValidationReport { valid: violations.is_empty(), violations })
}
