//! Graph-side procedures: independent dominating sets and their translation
//! to and from simplifications of a built instance.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::model::BendId;

use super::{GadgetLayout, Graph, ReductionError};

/// Largest graph accepted by [`min_independent_dominating_set`].
pub const MAX_EXHAUSTIVE_VERTICES: usize = 20;

/// Greedy maximal independent set over ascending vertex ids.
pub fn greedy_maximal_independent_set(graph: &Graph) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    let mut blocked = vec![false; graph.num_vertices()];
    for v in 0..graph.num_vertices() {
        if !blocked[v] {
            set.insert(v);
            for u in graph.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    set
}

/// Smallest independent dominating set, lexicographically first among
/// those of minimum size.
pub fn min_independent_dominating_set(graph: &Graph) -> Result<BTreeSet<usize>, ReductionError> {
    let n = graph.num_vertices();
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(ReductionError::InvalidGraph(format!(
            "{n} vertices exceeds the exhaustive-search cap of {MAX_EXHAUSTIVE_VERTICES}"
        )));
    }
    for size in 0..=n {
        for combo in (0..n).combinations(size) {
            let set: BTreeSet<usize> = combo.into_iter().collect();
            if graph.is_independent_dominating(&set) {
                return Ok(set);
            }
        }
    }
    unreachable!("a maximal independent set always exists")
}

/// The simplification encoding `set`: vertex gadgets of `set` keep all their
/// bends, all other gadgets keep only their first and last bend (plus any
/// shared bend kept by a vertex gadget). Connectors are always kept.
pub fn corresponding_simplification(
    layout: &GadgetLayout,
    set: &BTreeSet<usize>,
) -> Result<BTreeSet<BendId>, ReductionError> {
    if !layout.graph.is_independent_dominating(set) {
        return Err(ReductionError::NotIndependentDominating(set.clone()));
    }
    let mut retained: BTreeSet<BendId> = layout.connectors.iter().copied().collect();
    for g in &layout.vertex_gadgets {
        let b = &g.placement.bends;
        if set.contains(&g.vertex) {
            retained.extend(b.iter().copied());
        } else {
            retained.extend([b[0], b[b.len() - 1]]);
        }
    }
    let ends = layout
        .edge_gadgets
        .iter()
        .map(|g| &g.placement.bends)
        .chain(layout.neighborhood_gadgets.iter().map(|g| &g.placement.bends));
    for b in ends {
        retained.extend([b[0], b[b.len() - 1]]);
    }
    Ok(retained)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MidsExtraction {
    pub set: BTreeSet<usize>,
    /// `true` if the set was read off the vertex gadgets, `false` if the
    /// greedy fallback was used.
    pub read_off: bool,
}

/// Reads an independent dominating set off a simplification of a built
/// instance: the vertices whose vertex gadget keeps an inner bend. Used only
/// when every unshared inner bend of edge and neighborhood gadgets is
/// dropped and the result is independent and dominating; otherwise falls
/// back to the greedy maximal independent set.
pub fn extract_mids(layout: &GadgetLayout, retained: &BTreeSet<BendId>) -> MidsExtraction {
    let zigzags_skipped = layout.edge_gadgets.iter().all(|g| g.inner().iter().all(|b| !retained.contains(b)))
        && layout
            .neighborhood_gadgets
            .iter()
            .all(|g| (0..g.shared.len() - 1).all(|i| g.zigzag(i).iter().all(|b| !retained.contains(b))));
    if zigzags_skipped {
        let set: BTreeSet<usize> = layout
            .vertex_gadgets
            .iter()
            .filter(|g| g.inner().iter().any(|b| retained.contains(b)))
            .map(|g| g.vertex)
            .collect();
        if layout.graph.is_independent_dominating(&set) {
            return MidsExtraction { set, read_off: true };
        }
    }
    MidsExtraction { set: greedy_maximal_independent_set(&layout.graph), read_off: false }
}
