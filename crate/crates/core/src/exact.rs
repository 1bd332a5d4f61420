//! Exact solvers: the subset search over shared bends, and exhaustive search.
//!
//! Shared bends are the only coupling between polylines. Once it is fixed
//! which shared bends are kept, every polyline can be optimized on its own:
//! kept shared bends become mandatory (no shortcut may skip them) and the
//! others are deleted from every shortcut graph. Trying all `2^k` choices
//! and taking the best union of per-polyline shortest paths is exact.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frechet;
use crate::model::{BendId, PolylineBundle, ToleranceSpec};
use crate::shortcut::{self, ShortcutGraph};

pub const DEFAULT_MAX_N: usize = 20;
pub const DEFAULT_MAX_K: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance too large: {what} = {actual} exceeds the cap of {cap}")]
    InstanceTooLarge { what: &'static str, actual: usize, cap: usize },
}

/// Removes `drop` positions and all edges skipping a `keep` position.
pub fn prune_graph(graph: &ShortcutGraph, keep: &BTreeSet<usize>, drop: &BTreeSet<usize>) -> ShortcutGraph {
    graph.pruned(keep, drop)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FptStats {
    pub k: usize,
    pub subsets_searched: u64,
    pub optimum_size: usize,
    /// Whether keeping every shared bend left all graphs connected.
    pub all_shared_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FptOutcome {
    pub retained: BTreeSet<BendId>,
    pub stats: FptStats,
}

/// Per-polyline positions of the shared bends, split by a subset mask.
struct SharedLayout {
    shared: Vec<BendId>,
    /// For every polyline: (index into `shared`, position) pairs.
    per_polyline: Vec<Vec<(usize, usize)>>,
}

impl SharedLayout {
    fn new(bundle: &PolylineBundle) -> Self {
        let shared: Vec<BendId> = bundle.shared_bends().into_iter().collect();
        let mut per_polyline = vec![Vec::new(); bundle.num_polylines()];
        for (idx, &b) in shared.iter().enumerate() {
            for &(pid, pos) in bundle.occurrences(b) {
                per_polyline[pid].push((idx, pos));
            }
        }
        SharedLayout { shared, per_polyline }
    }

    fn split(&self, pid: usize, mask: u64) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let (keep, drop): (Vec<_>, Vec<_>) = self.per_polyline[pid].iter().partition(|&&(idx, _)| mask >> idx & 1 == 1);
        (keep.into_iter().map(|&(_, pos)| pos).collect(), drop.into_iter().map(|&(_, pos)| pos).collect())
    }
}

/// Evaluates one subset of kept shared bends; `None` if some polyline
/// cannot be simplified under that choice.
fn evaluate_subset(
    bundle: &PolylineBundle,
    graphs: &[ShortcutGraph],
    layout: &SharedLayout,
    mask: u64,
) -> Option<BTreeSet<BendId>> {
    let mut retained = BTreeSet::new();
    for (pid, graph) in graphs.iter().enumerate() {
        let (keep, drop) = layout.split(pid, mask);
        let path = prune_graph(graph, &keep, &drop).shortest_path()?;
        let line = bundle.polyline(pid);
        retained.extend(path.into_iter().map(|pos| line[pos]));
    }
    Some(retained)
}

fn better(a: &BTreeSet<BendId>, b: &BTreeSet<BendId>) -> bool {
    (a.len(), a.iter().collect::<Vec<_>>()) < (b.len(), b.iter().collect::<Vec<_>>())
}

/// Exact optimum by enumerating subsets of the shared bends in Gray-code
/// order. Among equal-size optima the lexicographically smallest set wins,
/// so the result does not depend on how the work is split across threads.
pub fn fpt_solve(bundle: &PolylineBundle, tol: ToleranceSpec, max_k: usize) -> Result<FptOutcome, ExactError> {
    let layout = SharedLayout::new(bundle);
    let k = layout.shared.len();
    if k > max_k || k >= 64 {
        return Err(ExactError::InstanceTooLarge { what: "k", actual: k, cap: max_k.min(63) });
    }
    let graphs = shortcut::build_all(bundle, tol);
    let total = 1u64 << k;

    let (best, searched) = (0..total)
        .into_par_iter()
        .map(|i| {
            let gray = i ^ (i >> 1);
            (evaluate_subset(bundle, &graphs, &layout, gray), 1u64)
        })
        .reduce(
            || (None, 0),
            |(a, na), (b, nb)| {
                let best = match (a, b) {
                    (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
                    (a, b) => a.or(b),
                };
                (best, na + nb)
            },
        );
    let all_shared_connected = evaluate_subset(bundle, &graphs, &layout, total - 1).is_some();
    let retained = best.expect("keeping every shared bend is always feasible");
    Ok(FptOutcome {
        stats: FptStats { k, subsets_searched: searched, optimum_size: retained.len(), all_shared_connected },
        retained,
    })
}

/// Smallest valid retained set by exhaustive search, lexicographically
/// smallest among minima.
///
/// Segment validity is decided directly with the Fréchet primitive and
/// memoized per polyline position pair; no shortcut graph is involved.
pub fn brute_force(bundle: &PolylineBundle, tol: ToleranceSpec, max_n: usize) -> Result<BTreeSet<BendId>, ExactError> {
    let n = bundle.num_bends();
    if n > max_n {
        return Err(ExactError::InstanceTooLarge { what: "n", actual: n, cap: max_n });
    }
    let mut memo: Vec<Vec<Vec<Option<bool>>>> =
        bundle.polylines().iter().map(|l| vec![vec![None; l.len()]; l.len()]).collect();
    let mut segment_ok = |pid: usize, i: usize, j: usize| -> bool {
        *memo[pid][i][j].get_or_insert_with(|| {
            let chain = bundle.chain(pid, i, j);
            frechet::segment_chain_within(chain[0], chain[chain.len() - 1], &chain, tol.delta, tol.eps)
                .expect("chain has at least two points")
        })
    };

    let mandatory = bundle.endpoints();
    let optional: Vec<BendId> = (0..n).filter(|b| !mandatory.contains(b)).collect();
    for size in 0..=optional.len() {
        for extra in optional.iter().copied().combinations(size) {
            let mut retained = mandatory.clone();
            retained.extend(extra);
            let valid = bundle.polylines().iter().enumerate().all(|(pid, line)| {
                let kept: Vec<usize> = (0..line.len()).filter(|&pos| retained.contains(&line[pos])).collect();
                kept.windows(2).all(|w| segment_ok(pid, w[0], w[1]))
            });
            if valid {
                return Ok(retained);
            }
        }
    }
    unreachable!("retaining every bend is always valid")
}
