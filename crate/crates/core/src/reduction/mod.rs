//! Hardness gadgets: polyline bundles built from graphs so that optimal
//! simplifications encode minimum independent dominating sets.
//!
//! Every graph vertex gets a vertical zigzag (vertex gadget) whose only
//! shortcut skips all of its inner bends, and a neighborhood gadget that can
//! only be simplified cheaply if one of the vertex gadgets of its closed
//! neighborhood keeps its inner bends. Every edge gets an edge gadget that
//! can only be simplified cheaply if at most one of its two vertex gadgets
//! keeps its inner bends. Gadgets couple through bends shared with the
//! vertex gadgets.

mod build;
mod mids;
mod verify;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BendId, ModelError};

pub use build::build_pbs_from_graph;
pub use mids::{
    corresponding_simplification, extract_mids, greedy_maximal_independent_set, min_independent_dominating_set,
    MidsExtraction,
};
pub use verify::{
    c_closed_form, c_trig, d2_closed_form, d4_closed_form, d4_reference, verify_critical_distances,
    verify_gadget_claims, verify_gadget_claims_with, ClaimsReport, DistanceRecord, DistanceReport, GadgetClaimReport,
    Quantity, D2_LOWER_BOUND,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("graph must have at least two vertices, got {0}")]
    GraphTooSmall(usize),
    #[error("vertex {0} has no incident edge; its neighborhood gadget cannot force domination")]
    IsolatedVertex(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid reduction parameters: {0}")]
    InvalidParams(String),
    #[error("{gadget}: shortcut {edge:?} violates the gadget's shortcut structure")]
    ClaimViolation { gadget: GadgetRef, edge: (usize, usize) },
    #[error("{gadget}: expected shortcut {edge:?} is missing")]
    MissingShortcut { gadget: GadgetRef, edge: (usize, usize) },
    #[error("{gadget}: shortcut {edge:?} is within floating-point noise of the threshold")]
    Indeterminate { gadget: GadgetRef, edge: (usize, usize) },
    #[error("{gadget}: {quantity:?} measured {measured} vs closed form {expected}")]
    FormulaMismatch { gadget: GadgetRef, quantity: Quantity, measured: f64, expected: f64 },
    #[error("vertex set {0:?} is not independent and dominating")]
    NotIndependentDominating(BTreeSet<usize>),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    /// Sorted, each as `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ReductionError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(ReductionError::InvalidGraph(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(ReductionError::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(ReductionError::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(Graph { n, edges: set.into_iter().collect() })
    }

    /// Parses the text edge list: a header line `n m`, then `m` lines `u v`.
    pub fn parse_edge_list(text: &str) -> Result<Self, ReductionError> {
        let bad = |msg: String| ReductionError::InvalidGraph(msg);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).enumerate();
        let nums = |line: &str, lineno: usize| -> Result<(usize, usize), ReductionError> {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                [a, b] => Ok((
                    a.parse().map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?,
                    b.parse().map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?,
                )),
                _ => Err(bad(format!("line {}: expected two integers", lineno + 1))),
            }
        };
        let (lineno, header) = lines.next().ok_or_else(|| bad("empty edge list".into()))?;
        let (n, m) = nums(header, lineno)?;
        let edges = lines.map(|(i, l)| nums(l, i)).collect::<Result<Vec<_>, _>>()?;
        if edges.len() != m {
            return Err(bad(format!("header announces {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// `Adj(v)`: `v` together with its neighbors.
    pub fn closed_neighborhood(&self, v: usize) -> BTreeSet<usize> {
        let mut out = self.neighbors(v);
        out.insert(v);
        out
    }

    pub fn is_independent(&self, set: &BTreeSet<usize>) -> bool {
        self.edges.iter().all(|(u, v)| !(set.contains(u) && set.contains(v)))
    }

    pub fn is_dominating(&self, set: &BTreeSet<usize>) -> bool {
        (0..self.n).all(|v| self.closed_neighborhood(v).iter().any(|u| set.contains(u)))
    }

    pub fn is_independent_dominating(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&v| v < self.n) && self.is_independent(set) && self.is_dominating(set)
    }

    /// Sparsity constant `c = max(1, m̂ / n̂)`.
    pub fn sparsity(&self) -> f64 {
        (self.edges.len() as f64 / self.n as f64).max(1.0)
    }
}

/// Geometry parameters of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub delta: f64,
    pub gamma: f64,
    pub x_spacing: f64,
    pub two_polyline_mode: bool,
}

impl ReductionParams {
    /// `γ` at half its allowed maximum and the minimum `x_spacing`.
    pub fn defaults(n_hat: usize, delta: f64) -> Self {
        let n2 = (n_hat * n_hat) as f64;
        ReductionParams {
            delta,
            gamma: delta / (10.0 * n2 + 5.0),
            x_spacing: (2.0 * n2 + 2.0) * 3.0 * delta,
            two_polyline_mode: false,
        }
    }

    pub fn gamma_max(n_hat: usize, delta: f64) -> f64 {
        2.0 * delta / (10.0 * (n_hat * n_hat) as f64 + 5.0)
    }

    pub fn x_spacing_min(n_hat: usize, delta: f64) -> f64 {
        (2.0 * (n_hat * n_hat) as f64 + 2.0) * 3.0 * delta
    }

    /// Horizontal step between consecutive inner bends of a gadget spanning
    /// adjacent vertex gadgets.
    pub fn r_min(&self, n_hat: usize) -> f64 {
        self.x_spacing / (2.0 * (n_hat * n_hat) as f64 + 2.0)
    }

    pub fn validate(&self, n_hat: usize) -> Result<(), ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidParams(m));
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta = {} must be positive", self.delta));
        }
        if !(self.gamma > 0.0 && self.gamma <= Self::gamma_max(n_hat, self.delta)) {
            return bad(format!("gamma = {} must lie in (0, {}]", self.gamma, Self::gamma_max(n_hat, self.delta)));
        }
        if !(self.x_spacing.is_finite() && self.x_spacing >= Self::x_spacing_min(n_hat, self.delta)) {
            return bad(format!(
                "x_spacing = {} must be at least {}",
                self.x_spacing,
                Self::x_spacing_min(n_hat, self.delta)
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "id", rename_all = "snake_case")]
pub enum GadgetRef {
    Vertex(usize),
    Edge(usize),
    Neighborhood(usize),
}

impl fmt::Display for GadgetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetRef::Vertex(v) => write!(f, "vertex gadget {v}"),
            GadgetRef::Edge(e) => write!(f, "edge gadget {e}"),
            GadgetRef::Neighborhood(v) => write!(f, "neighborhood gadget {v}"),
        }
    }
}

/// Where a gadget's chain lives: polyline and starting position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub polyline: usize,
    pub start: usize,
    /// The gadget's bends in chain order.
    pub bends: Vec<BendId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexGadget {
    pub vertex: usize,
    pub placement: Placement,
}

impl VertexGadget {
    pub fn inner(&self) -> &[BendId] {
        let b = &self.placement.bends;
        &b[1..b.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeGadget {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    pub placement: Placement,
    /// Second and second-last bend, owned by the vertex gadgets of `u` and `v`.
    pub shared: [BendId; 2],
    /// Inner-bend levels (1-based) used at `u` and `v`.
    pub levels: [usize; 2],
    /// Step between consecutive inner bends along the gadget's axis.
    pub spacing: f64,
}

impl EdgeGadget {
    /// The `2n̂² + 1` unshared bends between the two shared ones.
    pub fn inner(&self) -> &[BendId] {
        let b = &self.placement.bends;
        &b[2..b.len() - 2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodGadget {
    pub vertex: usize,
    /// `Adj(v)` in left-to-right order.
    pub members: Vec<usize>,
    pub placement: Placement,
    /// `b_1 … b_|Adj(v)|`.
    pub shared: Vec<BendId>,
    /// Positions of the shared bends within the gadget chain.
    pub shared_positions: Vec<usize>,
    pub level: usize,
    /// Inner step of each zigzag between consecutive shared bends.
    pub spacings: Vec<f64>,
    /// Distance between `b_1` and `b_|Adj(v)|`.
    pub span: f64,
}

impl NeighborhoodGadget {
    /// Inner zigzag bends between `b_i` and `b_{i+1}`.
    pub fn zigzag(&self, i: usize) -> &[BendId] {
        let (a, b) = (self.shared_positions[i], self.shared_positions[i + 1]);
        &self.placement.bends[a + 1..b]
    }
}

/// Everything downstream code needs to interpret a built instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetLayout {
    pub graph: Graph,
    pub params: ReductionParams,
    pub vertex_gadgets: Vec<VertexGadget>,
    pub edge_gadgets: Vec<EdgeGadget>,
    pub neighborhood_gadgets: Vec<NeighborhoodGadget>,
    /// Far-away joints between gadgets in two-polyline mode.
    pub connectors: Vec<BendId>,
}

impl GadgetLayout {
    pub fn shared_bends(&self) -> BTreeSet<BendId> {
        self.edge_gadgets
            .iter()
            .flat_map(|e| e.shared)
            .chain(self.neighborhood_gadgets.iter().flat_map(|g| g.shared.iter().copied()))
            .collect()
    }

    pub fn placement(&self, gadget: GadgetRef) -> &Placement {
        match gadget {
            GadgetRef::Vertex(v) => &self.vertex_gadgets[v].placement,
            GadgetRef::Edge(e) => &self.edge_gadgets[e].placement,
            GadgetRef::Neighborhood(v) => &self.neighborhood_gadgets[v].placement,
        }
    }

    pub fn gadgets(&self) -> impl Iterator<Item = GadgetRef> + '_ {
        (0..self.vertex_gadgets.len())
            .map(GadgetRef::Vertex)
            .chain((0..self.edge_gadgets.len()).map(GadgetRef::Edge))
            .chain((0..self.neighborhood_gadgets.len()).map(GadgetRef::Neighborhood))
    }
}

/// Bend count of the construction as a function of `n̂` and `m̂`.
pub fn expected_bend_count(n_hat: usize, m_hat: usize) -> usize {
    let (n, m) = (n_hat, m_hat);
    2 * n * n + 2 * n + 2 * m * n * n + 3 * m + 4 * m * n * n + 2 * m + 2 * n
}

/// Size of the simplification corresponding to an independent dominating
/// set with `set_size` vertices.
pub fn corresponding_size(n_hat: usize, m_hat: usize, set_size: usize) -> usize {
    2 * n_hat * (set_size + 2) + 2 * m_hat
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::parse_edge_list("3 2\n0 1\n2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 0\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n0 1\n1 0\n").is_err());
        assert!(Graph::parse_edge_list("2 1\n0 x\n").is_err());
    }

    #[test]
    fn bend_count_formula() {
        assert_eq!(expected_bend_count(2, 1), 45);
        assert_eq!(corresponding_size(2, 1, 1), 14);
    }

    #[test]
    fn params_bounds() {
        let p = ReductionParams::defaults(3, 1.0);
        assert!(p.validate(3).is_ok());
        assert_eq!(p.r_min(3), 3.0);
        let mut q = p;
        q.gamma = ReductionParams::gamma_max(3, 1.0) * 1.01;
        assert!(q.validate(3).is_err());
        let mut q = p;
        q.x_spacing *= 0.99;
        assert!(q.validate(3).is_err());
    }
}
