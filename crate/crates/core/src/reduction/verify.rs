//! Numerical certification of built gadgets.
//!
//! The shortcut structure of each gadget is recomputed from coordinates and
//! compared with the intended one, and the critical bend-to-shortcut
//! distances are measured and compared with their closed forms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{Point, PolylineBundle, ToleranceSpec};
use crate::shortcut::ShortcutGraph;

use super::{GadgetLayout, GadgetRef, ReductionError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetClaimReport {
    pub gadget: GadgetRef,
    /// Chain length of the gadget.
    pub len: usize,
    /// Every shortcut skipping at least one bend, as chain positions.
    pub long_shortcuts: Vec<(usize, usize)>,
    /// Shortcuts outside the gadget's required family that lie in its
    /// tolerated family: for edge gadgets those beyond the three spanning
    /// ones, for neighborhood gadgets those skipping a shared bend and one
    /// neighbor.
    pub extras: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimsReport {
    pub gadgets: Vec<GadgetClaimReport>,
}

impl ClaimsReport {
    pub fn get(&self, gadget: GadgetRef) -> Option<&GadgetClaimReport> {
        self.gadgets.iter().find(|g| g.gadget == gadget)
    }
}

pub fn verify_gadget_claims(bundle: &PolylineBundle, layout: &GadgetLayout) -> Result<ClaimsReport, ReductionError> {
    verify_gadget_claims_with(bundle, layout, false)
}

/// Same as [`verify_gadget_claims`]; with `strict`, every shortcut decision
/// is also recomputed with the slack widened and narrowed by a rounding
/// margin, and a decision that flips is reported as indeterminate.
pub fn verify_gadget_claims_with(
    bundle: &PolylineBundle,
    layout: &GadgetLayout,
    strict: bool,
) -> Result<ClaimsReport, ReductionError> {
    let tol = ToleranceSpec::new(layout.params.delta)?;
    let mut gadgets = Vec::new();
    for gadget in layout.gadgets() {
        let placement = layout.placement(gadget);
        let points: Vec<Point> = placement.bends.iter().map(|&b| bundle.bend(b)).collect();
        let graph = ShortcutGraph::build(0, &points, tol);
        if strict {
            check_determinate(gadget, &points, &graph, tol)?;
        }
        let long: BTreeSet<(usize, usize)> = graph.long_edges().into_iter().collect();
        let n = points.len();
        let mut extras = Vec::new();
        match gadget {
            GadgetRef::Vertex(_) => expect_exactly(gadget, &long, &BTreeSet::from([(0, n - 1)]))?,
            GadgetRef::Edge(_) => {
                let spanning = BTreeSet::from([(0, n - 1), (0, n - 2), (1, n - 1)]);
                let allowed = BTreeSet::from([(0, 2), (0, 3), (n - 3, n - 1), (n - 4, n - 1)]);
                if let Some(&missing) = spanning.difference(&long).next() {
                    return Err(ReductionError::MissingShortcut { gadget, edge: missing });
                }
                for &e in long.difference(&spanning) {
                    if !allowed.contains(&e) {
                        return Err(ReductionError::ClaimViolation { gadget, edge: e });
                    }
                    extras.push(e);
                }
            }
            GadgetRef::Neighborhood(v) => {
                let g = &layout.neighborhood_gadgets[v];
                let family = neighborhood_family(n, &g.shared_positions);
                if let Some(&missing) = family.difference(&long).next() {
                    return Err(ReductionError::MissingShortcut { gadget, edge: missing });
                }
                let allowed = neighborhood_extras(n, &g.shared_positions);
                for &e in long.difference(&family) {
                    if !allowed.contains(&e) {
                        return Err(ReductionError::ClaimViolation { gadget, edge: e });
                    }
                    extras.push(e);
                }
            }
        }
        gadgets.push(GadgetClaimReport { gadget, len: n, long_shortcuts: long.into_iter().collect(), extras });
    }
    Ok(ClaimsReport { gadgets })
}

/// Shortcuts a neighborhood gadget must have: those skipping exactly one
/// shared bend, and those between the first bend or a shared bend and a
/// later shared bend or the last bend, except first to last.
pub(crate) fn neighborhood_family(len: usize, shared_positions: &[usize]) -> BTreeSet<(usize, usize)> {
    let last = len - 1;
    let mut out: BTreeSet<(usize, usize)> = shared_positions.iter().map(|&p| (p - 1, p + 1)).collect();
    let starts = std::iter::once(0).chain(shared_positions.iter().copied());
    for s in starts {
        for e in shared_positions.iter().copied().chain(std::iter::once(last)) {
            if e >= s + 2 && (s, e) != (0, last) {
                out.insert((s, e));
            }
        }
    }
    out
}

/// Shortcuts a neighborhood gadget may additionally have when consecutive
/// zigzags have different steps: those skipping a shared bend together with
/// one of its two neighbors.
pub(crate) fn neighborhood_extras(len: usize, shared_positions: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &p in shared_positions {
        if p >= 2 {
            out.insert((p - 2, p + 1));
        }
        if p + 2 < len {
            out.insert((p - 1, p + 2));
        }
    }
    out
}

fn expect_exactly(
    gadget: GadgetRef,
    found: &BTreeSet<(usize, usize)>,
    expected: &BTreeSet<(usize, usize)>,
) -> Result<(), ReductionError> {
    if let Some(&e) = found.difference(expected).next() {
        return Err(ReductionError::ClaimViolation { gadget, edge: e });
    }
    if let Some(&e) = expected.difference(found).next() {
        return Err(ReductionError::MissingShortcut { gadget, edge: e });
    }
    Ok(())
}

fn check_determinate(
    gadget: GadgetRef,
    points: &[Point],
    graph: &ShortcutGraph,
    tol: ToleranceSpec,
) -> Result<(), ReductionError> {
    let scale = points.iter().map(|p| p.x.abs().max(p.y.abs())).fold(tol.delta, f64::max);
    let margin = 64.0 * f64::EPSILON * scale;
    let narrow = ToleranceSpec { delta: tol.delta, eps: (tol.eps - margin).max(0.0) };
    let wide = ToleranceSpec { delta: tol.delta, eps: tol.eps + margin };
    let lo = ShortcutGraph::build(0, points, narrow);
    let hi = ShortcutGraph::build(0, points, wide);
    for (i, j) in graph.edges().chain(hi.edges()) {
        if lo.has_edge(i, j) != hi.has_edge(i, j) {
            return Err(ReductionError::Indeterminate { gadget, edge: (i, j) });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// Third-last bend of an edge gadget to the first → second-last shortcut.
    D1,
    /// Inner bend to a shortcut skipping two inner bends.
    D2,
    /// Edge gadget: bend before the endpoint of a second-bend → inner shortcut.
    D3,
    /// Neighborhood gadget: inner bend skipped by a shortcut from a shared bend.
    D4,
}

/// One measured distance, in absolute units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub gadget: GadgetRef,
    pub quantity: Quantity,
    /// Inner step of the measured gadget part divided by `δ`.
    pub r_prime: f64,
    pub measured: f64,
    pub closed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub delta: f64,
    pub records: Vec<DistanceRecord>,
}

impl DistanceReport {
    pub fn of(&self, q: Quantity) -> impl Iterator<Item = &DistanceRecord> {
        self.records.iter().filter(move |r| r.quantity == q)
    }
}

/// `48 / √2089`: the `d₂` bound at `r′ = 3`, in units of `δ`.
pub const D2_LOWER_BOUND: f64 = 1.050_200_008_304_967;

/// `d₂ / δ = 16 r′ / √(64 + 225 r′²)`.
pub fn d2_closed_form(r_prime: f64) -> f64 {
    16.0 * r_prime / (64.0 + 225.0 * r_prime * r_prime).sqrt()
}

/// `c(r′) = r′ · sin(arctan(8 / 5r′) − arctan(2 / 5r′))`.
pub fn c_trig(r_prime: f64) -> f64 {
    r_prime * ((8.0 / (5.0 * r_prime)).atan() - (2.0 / (5.0 * r_prime)).atan()).sin()
}

/// `c(r′) = 6 / √(25 + 68/r′² + 256/(25 r′⁴))`.
pub fn c_closed_form(r_prime: f64) -> f64 {
    let r2 = r_prime * r_prime;
    6.0 / (25.0 + 68.0 / r2 + 256.0 / (25.0 * r2 * r2)).sqrt()
}

/// `d₄ / δ = 3 r′ · sin(arctan(2 / 5r′)) = 6 / √(25 + 4/r′²)`.
pub fn d4_closed_form(r_prime: f64) -> f64 {
    6.0 / (25.0 + 4.0 / (r_prime * r_prime)).sqrt()
}

/// `6 / √(25 − 4/r′²)`, the same expression with `sin(arctan x)` taken as
/// `x / √(1 − x²)`. Not a distance of the construction; kept for comparison.
pub fn d4_reference(r_prime: f64) -> f64 {
    6.0 / (25.0 - 4.0 / (r_prime * r_prime)).sqrt()
}

fn d1_closed_form(r_prime: f64, gamma_rel: f64, steps: f64) -> f64 {
    let drop = 0.4 + gamma_rel;
    let vertical = 1.0 + gamma_rel - drop / steps;
    vertical * (drop / (steps * r_prime)).atan().cos()
}

fn d3_closed_form(r_prime: f64, gamma_rel: f64) -> f64 {
    let leg = (r_prime * r_prime + 1.6 * 1.6).sqrt();
    let a1 = (1.6 / r_prime).atan();
    let a2 = ((1.0 + gamma_rel) / (3.0 * r_prime)).atan();
    leg * (a1 - a2).sin()
}

/// Measures `d₁ … d₄` on every edge and neighborhood gadget and checks them
/// against their closed forms (within `10⁻⁹ δ`) and their bounds.
pub fn verify_critical_distances(
    bundle: &PolylineBundle,
    layout: &GadgetLayout,
) -> Result<DistanceReport, ReductionError> {
    let delta = layout.params.delta;
    let eps = ToleranceSpec::new(delta)?.eps;
    let gamma_rel = layout.params.gamma / delta;
    let n_hat = layout.graph.num_vertices();
    let steps = (2 * n_hat * n_hat + 2) as f64;
    let mut records = Vec::new();

    let dist = |bends: &[usize], p: usize, a: usize, b: usize| {
        bundle.bend(bends[p]).distance_to_segment(bundle.bend(bends[a]), bundle.bend(bends[b]))
    };

    for eg in &layout.edge_gadgets {
        let gadget = GadgetRef::Edge(eg.edge);
        let c = &eg.placement.bends;
        let n = c.len();
        let r = eg.spacing / delta;
        let mut push = |quantity, measured, closed: f64| {
            records.push(DistanceRecord { gadget, quantity, r_prime: r, measured, closed_form: closed * delta })
        };
        let d1 = d1_closed_form(r, gamma_rel, steps);
        push(Quantity::D1, dist(c, n - 3, 0, n - 2), d1);
        push(Quantity::D1, dist(c, 2, 1, n - 1), d1);
        let d2 = d2_closed_form(r);
        for start in [2, n - 6] {
            push(Quantity::D2, dist(c, start + 1, start, start + 3), d2);
            push(Quantity::D2, dist(c, start + 2, start, start + 3), d2);
        }
        let d3 = d3_closed_form(r, gamma_rel);
        push(Quantity::D3, dist(c, 3, 1, 4), d3);
        push(Quantity::D3, dist(c, n - 4, n - 5, n - 2), d3);
    }

    for ng in &layout.neighborhood_gadgets {
        let gadget = GadgetRef::Neighborhood(ng.vertex);
        let c = &ng.placement.bends;
        for (i, w) in ng.shared_positions.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let r = ng.spacings[i] / delta;
            let mut push = |quantity, measured, closed: f64| {
                records.push(DistanceRecord { gadget, quantity, r_prime: r, measured, closed_form: closed * delta })
            };
            push(Quantity::D4, dist(c, a + 1, a, a + 2), d4_closed_form(r));
            push(Quantity::D4, dist(c, b - 1, b - 2, b), d4_closed_form(r));
            push(Quantity::D2, dist(c, a + 2, a + 1, a + 4), d2_closed_form(r));
            push(Quantity::D2, dist(c, a + 3, a + 1, a + 4), d2_closed_form(r));
        }
    }

    for rec in &records {
        let mismatch = |expected: f64| ReductionError::FormulaMismatch {
            gadget: rec.gadget,
            quantity: rec.quantity,
            measured: rec.measured,
            expected,
        };
        if (rec.measured - rec.closed_form).abs() > 1e-9 * delta {
            return Err(mismatch(rec.closed_form));
        }
        let bound_ok = match rec.quantity {
            Quantity::D1 => rec.measured <= delta + eps,
            Quantity::D2 => rec.measured >= D2_LOWER_BOUND * delta - eps,
            Quantity::D3 => rec.measured > delta && rec.measured >= c_closed_form(rec.r_prime) * delta - eps,
            Quantity::D4 => rec.measured > delta,
        };
        if !bound_ok {
            return Err(mismatch(delta));
        }
    }
    Ok(DistanceReport { delta, records })
}
