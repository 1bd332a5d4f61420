//! Per-polyline shortcut graphs and optimal single-polyline simplification.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::frechet;
use crate::model::{BendId, Point, PolylineBundle, ToleranceSpec};

/// Forward DAG over the positions `0..len` of one polyline. `(i, j)` is an
/// edge iff the segment between positions `i` and `j` is within the
/// threshold of the sub-chain it replaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortcutGraph {
    polyline: usize,
    /// Sorted successor lists.
    succ: Vec<Vec<usize>>,
    removed: Vec<bool>,
}

impl ShortcutGraph {
    /// Naive construction: every pair is checked against its sub-chain.
    pub fn build(polyline: usize, points: &[Point], tol: ToleranceSpec) -> Self {
        let n = points.len();
        let succ = (0..n)
            .map(|i| {
                (i + 1..n)
                    .filter(|&j| {
                        j == i + 1
                            || frechet::segment_chain_within(points[i], points[j], &points[i..=j], tol.delta, tol.eps)
                                .expect("sub-chain has at least two points")
                    })
                    .collect()
            })
            .collect();
        ShortcutGraph { polyline, succ, removed: vec![false; n] }
    }

    /// A graph with the given forward edges; consecutive pairs are added.
    pub fn from_edges(polyline: usize, len: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets: Vec<BTreeSet<usize>> =
            (0..len).map(|i| if i + 1 < len { BTreeSet::from([i + 1]) } else { BTreeSet::new() }).collect();
        for (i, j) in edges {
            assert!(i < j && j < len, "edge ({i}, {j}) is not forward within {len} positions");
            sets[i].insert(j);
        }
        ShortcutGraph {
            polyline,
            succ: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            removed: vec![false; len],
        }
    }

    pub fn polyline(&self) -> usize {
        self.polyline
    }

    /// Number of positions, including removed ones.
    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn is_removed(&self, pos: usize) -> bool {
        self.removed[pos]
    }

    pub fn successors(&self, pos: usize) -> &[usize] {
        &self.succ[pos]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.succ.len() && self.succ[i].binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Edges that skip at least one position.
    pub fn long_edges(&self) -> Vec<(usize, usize)> {
        self.edges().filter(|&(i, j)| j > i + 1).collect()
    }

    /// Smallest `i` with an edge `(i, j)`: the incoming shortcut reaching
    /// farthest back.
    pub fn max_reach(&self, j: usize) -> Option<usize> {
        if j == 0 || self.removed[j] {
            return None;
        }
        (0..j).find(|&i| self.has_edge(i, j))
    }

    /// Largest number of segments skipped by a single edge.
    pub fn max_skip(&self) -> usize {
        self.edges().map(|(i, j)| j - i).max().unwrap_or(0)
    }

    /// Removes vertices in `drop` and every edge spanning a position in
    /// `keep`. The edge filter walks each successor list against the sorted
    /// kept positions, so the whole pass is quadratic in the graph size.
    pub fn pruned(&self, keep: &BTreeSet<usize>, drop: &BTreeSet<usize>) -> ShortcutGraph {
        assert!(keep.is_disjoint(drop), "keep and drop overlap");
        let n = self.len();
        let mut removed = self.removed.clone();
        for &p in drop {
            removed[p] = true;
        }
        // next_kept[i]: first kept position strictly after i.
        let mut next_kept = vec![usize::MAX; n];
        let mut upcoming = usize::MAX;
        for i in (0..n).rev() {
            next_kept[i] = upcoming;
            if keep.contains(&i) {
                upcoming = i;
            }
        }
        let succ = self
            .succ
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if removed[i] {
                    return Vec::new();
                }
                s.iter().copied().filter(|&j| !removed[j] && j <= next_kept[i]).collect()
            })
            .collect();
        ShortcutGraph { polyline: self.polyline, succ, removed }
    }

    /// Fewest-vertex path from the first to the last position, as positions.
    ///
    /// Ties are broken by always taking the farthest-reaching edge that
    /// still lies on some shortest path. Returns `None` when the endpoints
    /// are disconnected.
    pub fn shortest_path(&self) -> Option<Vec<usize>> {
        let n = self.len();
        if n == 0 || self.removed[0] || self.removed[n - 1] {
            return None;
        }
        let mut hops = vec![usize::MAX; n];
        hops[n - 1] = 0;
        for i in (0..n - 1).rev() {
            if self.removed[i] {
                continue;
            }
            hops[i] = self.succ[i].iter().filter_map(|&j| hops[j].checked_add(1)).min().unwrap_or(usize::MAX);
        }
        if hops[0] == usize::MAX {
            return None;
        }
        let mut path = vec![0];
        let mut cur = 0;
        while cur != n - 1 {
            cur = *self.succ[cur]
                .iter()
                .rev()
                .find(|&&j| hops[j] != usize::MAX && hops[j] + 1 == hops[cur])
                .expect("a successor on a shortest path exists");
            path.push(cur);
        }
        Some(path)
    }
}

pub fn build_shortcut_graph(bundle: &PolylineBundle, polyline: usize, tol: ToleranceSpec) -> ShortcutGraph {
    ShortcutGraph::build(polyline, &bundle.coordinates(polyline), tol)
}

/// Shortcut graphs for every polyline, built in parallel.
pub fn build_all(bundle: &PolylineBundle, tol: ToleranceSpec) -> Vec<ShortcutGraph> {
    (0..bundle.num_polylines()).into_par_iter().map(|pid| build_shortcut_graph(bundle, pid, tol)).collect()
}

/// Minimum-bend valid simplification of a single polyline, as bend indices
/// in polyline order.
pub fn optimal_single_polyline(bundle: &PolylineBundle, polyline: usize, tol: ToleranceSpec) -> Vec<BendId> {
    let graph = build_shortcut_graph(bundle, polyline, tol);
    let path = graph.shortest_path().expect("consecutive edges always connect an unpruned graph");
    let line = bundle.polyline(polyline);
    path.into_iter().map(|pos| line[pos]).collect()
}

/// Each polyline simplified on its own. The union can be inconsistent on
/// shared parts: a bend kept by one polyline stays in the others too.
pub fn per_polyline_simplify(bundle: &PolylineBundle, tol: ToleranceSpec) -> (BTreeSet<BendId>, Vec<Vec<BendId>>) {
    let per: Vec<Vec<BendId>> =
        (0..bundle.num_polylines()).into_par_iter().map(|pid| optimal_single_polyline(bundle, pid, tol)).collect();
    let union = per.iter().flatten().copied().collect();
    (union, per)
}
