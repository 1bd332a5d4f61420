//! Coordinates of the gadgets.
//!
//! Vertex gadgets are vertical zigzags side by side, `x_spacing` apart. Their
//! inner bends sit at heights `3δ·j` (`j = 1 … 2n̂`), alternating `δ` right
//! (odd `j`) and left (even `j`) of the gadget's axis; `j` is the bend's
//! level. Neighborhood gadget `v` shares the bends at level `2v + 1` of the
//! vertex gadgets in `Adj(v)`, so its shared bends are on one horizontal
//! line. Edge gadgets take the free even levels of their two endpoints in
//! ascending edge order and are rotated so that their two shared bends lie on
//! the gadget's own horizontal axis. Since all even levels have the same
//! horizontal offset, an edge gadget's axis is never shorter than
//! `x_spacing`.

use crate::model::{BendId, Point, PolylineBundle};

use super::verify;
use super::{
    EdgeGadget, GadgetLayout, Graph, NeighborhoodGadget, Placement, ReductionError, ReductionParams, VertexGadget,
};

/// Builds the instance and rejects it unless every gadget has exactly the
/// intended shortcut structure.
pub fn build_pbs_from_graph(
    graph: &Graph,
    params: &ReductionParams,
) -> Result<(PolylineBundle, GadgetLayout), ReductionError> {
    let (bundle, layout) = build_unchecked(graph, params)?;
    verify::verify_gadget_claims(&bundle, &layout)?;
    Ok((bundle, layout))
}

struct Builder {
    bends: Vec<Point>,
}

impl Builder {
    fn push(&mut self, p: Point) -> BendId {
        self.bends.push(p);
        self.bends.len() - 1
    }
}

pub(crate) fn build_unchecked(
    graph: &Graph,
    params: &ReductionParams,
) -> Result<(PolylineBundle, GadgetLayout), ReductionError> {
    let n_hat = graph.num_vertices();
    if n_hat < 2 {
        return Err(ReductionError::GraphTooSmall(n_hat));
    }
    params.validate(n_hat)?;
    if let Some(v) = (0..n_hat).find(|&v| graph.neighbors(v).is_empty()) {
        return Err(ReductionError::IsolatedVertex(v));
    }

    let delta = params.delta;
    let gamma = params.gamma;
    let steps = 2 * n_hat * n_hat + 2;
    let mut b = Builder { bends: Vec::new() };

    // Vertex gadgets: index [v][j] for j = 0 ..= 2n̂ + 1.
    let levels = 2 * n_hat;
    let mut vertex_bends: Vec<Vec<BendId>> = Vec::with_capacity(n_hat);
    for v in 0..n_hat {
        let cx = v as f64 * params.x_spacing;
        let mut chain = vec![b.push(Point::new(cx, 0.0))];
        for j in 1..=levels {
            let dx = if j % 2 == 1 { delta } else { -delta };
            chain.push(b.push(Point::new(cx + dx, 3.0 * delta * j as f64)));
        }
        chain.push(b.push(Point::new(cx, 3.0 * delta * (levels + 1) as f64)));
        vertex_bends.push(chain);
    }

    // Edge gadgets on even levels, assigned in ascending edge order.
    let mut next_even = vec![2usize; n_hat];
    let mut edge_chains = Vec::with_capacity(graph.num_edges());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let (lu, lv) = (next_even[u], next_even[v]);
        next_even[u] += 2;
        next_even[v] += 2;
        debug_assert!(lu <= levels && lv <= levels, "a vertex has at most n̂ - 1 incident edges");
        let (s1, s2) = (vertex_bends[u][lu], vertex_bends[v][lv]);
        let (p1, p2) = (b.bends[s1], b.bends[s2]);
        let axis = p2 - p1;
        let len = axis.norm();
        let ex = axis * (1.0 / len);
        let ey = Point::new(-ex.y, ex.x);
        let spacing = len / steps as f64;
        let local = |x: f64, y: f64| p1 + ex * x + ey * y;

        let end_drop = -(0.4 * delta + gamma);
        let mut chain = vec![b.push(local(0.0, end_drop)), s1];
        for k in 1..steps {
            let y = if k % 2 == 1 { -delta - gamma } else { 0.6 * delta - gamma };
            chain.push(b.push(local(k as f64 * spacing, y)));
        }
        chain.push(s2);
        chain.push(b.push(local(len, end_drop)));
        edge_chains.push(EdgeGadget {
            edge: e,
            u,
            v,
            placement: Placement { polyline: 0, start: 0, bends: chain },
            shared: [s1, s2],
            levels: [lu, lv],
            spacing,
        });
    }

    // Neighborhood gadgets on odd levels.
    let mut nbhd_chains = Vec::with_capacity(n_hat);
    for v in 0..n_hat {
        let level = 2 * v + 1;
        let members: Vec<usize> = graph.closed_neighborhood(v).into_iter().collect();
        let shared: Vec<BendId> = members.iter().map(|&u| vertex_bends[u][level]).collect();
        let first = b.bends[shared[0]];
        let last = b.bends[shared[shared.len() - 1]];
        let y0 = first.y;
        let span = last.x - first.x;
        let row = 0.8 * delta;

        let mut chain = vec![b.push(Point::new(first.x - 3.0 * span, y0 - row))];
        let mut shared_positions = Vec::with_capacity(shared.len());
        let mut spacings = Vec::with_capacity(shared.len() - 1);
        for (i, &s) in shared.iter().enumerate() {
            shared_positions.push(chain.len());
            chain.push(s);
            if let Some(&next) = shared.get(i + 1) {
                let (a, c) = (b.bends[s], b.bends[next]);
                let spacing = (c.x - a.x) / steps as f64;
                spacings.push(spacing);
                for k in 1..steps {
                    let y = if k % 2 == 1 { y0 + row } else { y0 - row };
                    chain.push(b.push(Point::new(a.x + k as f64 * spacing, y)));
                }
            }
        }
        chain.push(b.push(Point::new(last.x + 3.0 * span, y0 - row)));
        nbhd_chains.push(NeighborhoodGadget {
            vertex: v,
            members,
            placement: Placement { polyline: 0, start: 0, bends: chain },
            shared,
            shared_positions,
            level,
            spacings,
            span,
        });
    }

    let mut vertex_gadgets: Vec<VertexGadget> = vertex_bends
        .into_iter()
        .enumerate()
        .map(|(v, bends)| VertexGadget { vertex: v, placement: Placement { polyline: 0, start: 0, bends } })
        .collect();

    let mut connectors = Vec::new();
    let polylines: Vec<Vec<BendId>> = if params.two_polyline_mode {
        let (lo, hi) = b.bends.iter().fold(
            (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
            |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
        );
        let far = hi + Point::new(1.0, 1.0) * ((hi - lo).norm() * 1e6 / 2f64.sqrt());

        let mut first = Vec::new();
        for (i, g) in vertex_gadgets.iter_mut().enumerate() {
            if i > 0 {
                let c = b.push(far);
                connectors.push(c);
                first.push(c);
            }
            g.placement.polyline = 0;
            g.placement.start = first.len();
            first.extend(&g.placement.bends);
        }
        let mut second = Vec::new();
        let placements =
            edge_chains.iter_mut().map(|g| &mut g.placement).chain(nbhd_chains.iter_mut().map(|g| &mut g.placement));
        for (i, p) in placements.enumerate() {
            if i > 0 {
                let c = b.push(far);
                connectors.push(c);
                second.push(c);
            }
            p.polyline = 1;
            p.start = second.len();
            second.extend(&p.bends);
        }
        vec![first, second]
    } else {
        let placements = vertex_gadgets
            .iter_mut()
            .map(|g| &mut g.placement)
            .chain(edge_chains.iter_mut().map(|g| &mut g.placement))
            .chain(nbhd_chains.iter_mut().map(|g| &mut g.placement));
        placements
            .enumerate()
            .map(|(pid, p)| {
                p.polyline = pid;
                p.bends.clone()
            })
            .collect()
    };

    let bundle = PolylineBundle::new(b.bends, polylines)?;
    let layout = GadgetLayout {
        graph: graph.clone(),
        params: *params,
        vertex_gadgets,
        edge_gadgets: edge_chains,
        neighborhood_gadgets: nbhd_chains,
        connectors,
    };
    Ok((bundle, layout))
}
