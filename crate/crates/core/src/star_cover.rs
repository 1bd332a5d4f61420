//! Star covers and the bi-criteria simplification built on them.
//!
//! Every polyline gets a direction. A star is a central bend together with
//! at most one incoming shortcut per polyline through it; it covers the
//! segment–polyline pairs its shortcuts span. A greedy set cover over the
//! `n` maximal stars, followed by keeping only the central bends and the
//! polyline endpoints, gives a solution whose segments stay within twice
//! the threshold: every kept segment nests inside some valid shortcut.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{self, BendId, ModelError, PolylineBundle, ToleranceSpec};
use crate::shortcut::{self, ShortcutGraph};

/// Per-polyline direction flags; `true` reverses the stored order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    reversed: Vec<bool>,
}

impl Orientation {
    pub fn forward(num_polylines: usize) -> Self {
        Orientation { reversed: vec![false; num_polylines] }
    }

    pub fn reverse_all(num_polylines: usize) -> Self {
        Orientation { reversed: vec![true; num_polylines] }
    }

    pub fn from_flags(reversed: Vec<bool>) -> Self {
        Orientation { reversed }
    }

    pub fn is_reversed(&self, pid: usize) -> bool {
        self.reversed[pid]
    }
}

/// A bundle whose polylines have been re-listed in their assigned direction.
#[derive(Debug, Clone)]
pub struct OrientedBundle {
    bundle: PolylineBundle,
    orientation: Orientation,
}

impl OrientedBundle {
    pub fn bundle(&self) -> &PolylineBundle {
        &self.bundle
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Source bend of polyline `pid` under the orientation.
    pub fn source(&self, pid: usize) -> BendId {
        self.bundle.polyline(pid)[0]
    }
}

pub fn orient_bundle(bundle: &PolylineBundle, orientation: &Orientation) -> OrientedBundle {
    assert_eq!(orientation.reversed.len(), bundle.num_polylines(), "one flag per polyline");
    let polylines = bundle
        .polylines()
        .iter()
        .zip(&orientation.reversed)
        .map(|(line, &rev)| if rev { line.iter().rev().copied().collect() } else { line.clone() })
        .collect();
    let oriented =
        PolylineBundle::new(bundle.bends().to_vec(), polylines).expect("reversing polylines preserves validity");
    OrientedBundle { bundle: oriented, orientation: orientation.clone() }
}

/// Segment `segment` (from position `segment` to `segment + 1`) of `polyline`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SegmentPolylinePair {
    pub polyline: usize,
    pub segment: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub central: BendId,
    /// Polyline id → position of the outer bend of that polyline's arm.
    pub arms: BTreeMap<usize, usize>,
}

impl Star {
    pub fn new(central: BendId) -> Self {
        Star { central, arms: BTreeMap::new() }
    }

    /// Whether every arm is an incoming shortcut into the central bend.
    pub fn is_valid(&self, bundle: &PolylineBundle, graphs: &[ShortcutGraph]) -> bool {
        self.arms.iter().all(|(&pid, &outer)| {
            bundle.position_in(pid, self.central).is_some_and(|c| outer < c && graphs[pid].has_edge(outer, c))
        })
    }
}

/// Pairs spanned by the arms of `star`.
pub fn covered_pairs(star: &Star, bundle: &PolylineBundle) -> BTreeSet<SegmentPolylinePair> {
    let mut out = BTreeSet::new();
    for (&pid, &outer) in &star.arms {
        let central = bundle.position_in(pid, star.central).expect("arm polyline contains the central bend");
        out.extend((outer..central).map(|segment| SegmentPolylinePair { polyline: pid, segment }));
    }
    out
}

/// Every segment–polyline pair of the bundle.
pub fn universe(bundle: &PolylineBundle) -> BTreeSet<SegmentPolylinePair> {
    bundle
        .polylines()
        .iter()
        .enumerate()
        .flat_map(|(pid, l)| (0..l.len() - 1).map(move |segment| SegmentPolylinePair { polyline: pid, segment }))
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarCover {
    pub stars: Vec<Star>,
}

impl StarCover {
    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn centrals(&self) -> BTreeSet<BendId> {
        self.stars.iter().map(|s| s.central).collect()
    }

    pub fn covered(&self, bundle: &PolylineBundle) -> BTreeSet<SegmentPolylinePair> {
        self.stars.iter().flat_map(|s| covered_pairs(s, bundle)).collect()
    }

    pub fn covers(&self, bundle: &PolylineBundle) -> bool {
        self.covered(bundle) == universe(bundle)
    }
}

/// `t`: most polylines through one bend; `w`: most segments one shortcut skips.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    pub t: usize,
    pub w: usize,
}

impl CoverStats {
    /// Upper bound `t · w` on the pairs a single star covers.
    pub fn m(&self) -> usize {
        self.t * self.w
    }
}

pub fn cover_stats(bundle: &PolylineBundle, graphs: &[ShortcutGraph]) -> CoverStats {
    let t = (0..bundle.num_bends()).map(|b| bundle.occurrences(b).len()).max().unwrap_or(0);
    let w = graphs.iter().map(ShortcutGraph::max_skip).max().unwrap_or(0);
    CoverStats { t, w }
}

/// One star per bend, each arm the farthest-reaching incoming shortcut.
pub fn enumerate_maximal_stars(bundle: &PolylineBundle, graphs: &[ShortcutGraph]) -> Vec<Star> {
    (0..bundle.num_bends())
        .map(|b| {
            let arms = bundle
                .occurrences(b)
                .iter()
                .filter_map(|&(pid, pos)| graphs[pid].max_reach(pos).map(|outer| (pid, outer)))
                .collect();
            Star { central: b, arms }
        })
        .collect()
}

/// Greedy set cover over the maximal stars: repeatedly take the star with
/// the most uncovered pairs, lowest central bend on ties.
pub fn greedy_star_cover(bundle: &PolylineBundle, graphs: &[ShortcutGraph]) -> StarCover {
    let stars = enumerate_maximal_stars(bundle, graphs);
    let spans: Vec<Vec<(usize, usize, usize)>> = stars
        .iter()
        .map(|s| {
            s.arms
                .iter()
                .map(|(&pid, &outer)| (pid, outer, bundle.position_in(pid, s.central).expect("arm on polyline")))
                .collect()
        })
        .collect();
    let mut covered: Vec<Vec<bool>> = bundle.polylines().iter().map(|l| vec![false; l.len() - 1]).collect();
    let mut remaining: usize = covered.iter().map(Vec::len).sum();
    let mut chosen = Vec::new();

    while remaining > 0 {
        let mut best = (0, usize::MAX);
        for (idx, arms) in spans.iter().enumerate() {
            let gain: usize =
                arms.iter().map(|&(pid, from, to)| covered[pid][from..to].iter().filter(|c| !**c).count()).sum();
            if gain > best.0 {
                best = (gain, idx);
            }
        }
        assert!(best.0 > 0, "consecutive shortcuts always leave a coverable pair");
        for &(pid, from, to) in &spans[best.1] {
            for c in &mut covered[pid][from..to] {
                *c = true;
            }
        }
        remaining -= best.0;
        chosen.push(stars[best.1].clone());
    }
    StarCover { stars: chosen }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BicriteriaOutcome {
    pub retained: BTreeSet<BendId>,
    pub cover: StarCover,
    pub stats: CoverStats,
}

/// Central bends of the greedy cover plus all polyline endpoints. The
/// result is valid at twice the threshold.
pub fn bicriteria_simplify(
    bundle: &PolylineBundle,
    tol: ToleranceSpec,
    orientation: &Orientation,
) -> BicriteriaOutcome {
    let oriented = orient_bundle(bundle, orientation);
    let ob = oriented.bundle();
    let graphs = shortcut::build_all(ob, tol);
    let cover = greedy_star_cover(ob, &graphs);
    let stats = cover_stats(ob, &graphs);
    let mut retained = cover.centrals();
    retained.extend(ob.endpoints());
    BicriteriaOutcome { retained, cover, stats }
}

/// Splits a valid simplification into stars: each kept bend becomes the
/// centre of a star whose arms are the simplified segments ending at it.
pub fn decompose_solution(bundle: &PolylineBundle, retained: &BTreeSet<BendId>) -> Result<StarCover, ModelError> {
    let positions = model::induced_positions(bundle, retained)?;
    let mut by_central: BTreeMap<BendId, Star> = BTreeMap::new();
    for (pid, kept) in positions.iter().enumerate() {
        let line = bundle.polyline(pid);
        for w in kept.windows(2) {
            let central = line[w[1]];
            by_central.entry(central).or_insert_with(|| Star::new(central)).arms.insert(pid, w[0]);
        }
    }
    Ok(StarCover { stars: by_central.into_values().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;

    fn collinear(n: usize) -> PolylineBundle {
        let pts = (0..n).map(|i| Point::new(i as f64, 0.0)).collect();
        PolylineBundle::new(pts, vec![(0..n).collect()]).unwrap()
    }

    fn tol(d: f64) -> ToleranceSpec {
        ToleranceSpec::new(d).unwrap()
    }

    #[test]
    fn orientation_flags() {
        let b = PolylineBundle::new(vec![Point::default(); 5], vec![vec![0, 1, 2], vec![3, 1, 4]]).unwrap();
        assert_eq!(orient_bundle(&b, &Orientation::forward(2)).bundle().polyline(0), &[0, 1, 2]);
        assert_eq!(orient_bundle(&b, &Orientation::reverse_all(2)).bundle().polyline(0), &[2, 1, 0]);
        let mixed = orient_bundle(&b, &Orientation::from_flags(vec![false, true]));
        assert_eq!(mixed.source(0), 0);
        assert_eq!(mixed.source(1), 4);
    }

    #[test]
    fn covered_pair_counts() {
        let b = collinear(5);
        let mut star = Star::new(4);
        assert!(covered_pairs(&star, &b).is_empty());
        star.arms.insert(0, 0);
        assert_eq!(covered_pairs(&star, &b).len(), 4);

        let two = PolylineBundle::new(vec![Point::default(); 7], vec![vec![0, 1, 2, 3], vec![4, 5, 6, 3]]).unwrap();
        let star = Star { central: 3, arms: BTreeMap::from([(0, 1), (1, 0)]) };
        assert_eq!(covered_pairs(&star, &two).len(), 5);
    }

    #[test]
    fn maximal_stars_on_a_line() {
        let b = collinear(5);
        let graphs = shortcut::build_all(&b, tol(0.1));
        let stars = enumerate_maximal_stars(&b, &graphs);
        assert_eq!(stars.len(), 5);
        assert!(stars[0].arms.is_empty());
        assert_eq!(covered_pairs(&stars[4], &b).len(), 4);

        let cover = greedy_star_cover(&b, &graphs);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover.stars[0].central, 4);

        let out = bicriteria_simplify(&b, tol(0.1), &Orientation::forward(1));
        assert_eq!(out.retained, BTreeSet::from([0, 4]));
    }

    #[test]
    fn zigzag_needs_one_star_per_segment() {
        let pts: Vec<Point> = (0..6).map(|i| Point::new(i as f64, if i % 2 == 0 { 0.0 } else { 1.0 })).collect();
        let b = PolylineBundle::new(pts, vec![vec![0, 1, 2], vec![2, 3, 4, 5]]).unwrap();
        let graphs = shortcut::build_all(&b, tol(0.1));
        assert!(graphs.iter().all(|g| g.max_skip() == 1));
        let cover = greedy_star_cover(&b, &graphs);
        // n minus the two sources; bend 2 is a source of polyline 1 but not of polyline 0.
        assert_eq!(cover.len(), 6 - 1);
        assert!(cover.covers(&b));
        assert_eq!(cover_stats(&b, &graphs), CoverStats { t: 2, w: 1 });
    }

    #[test]
    fn decomposition_of_a_solution() {
        let b = collinear(5);
        let cover = decompose_solution(&b, &BTreeSet::from([0, 2, 4])).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.covers(&b));
    }
}
