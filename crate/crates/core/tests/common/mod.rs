//! Oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use pbs_core::frechet;
use pbs_core::io::gen_random_bundle;
use pbs_core::reduction::Graph;
use pbs_core::{Point, PolylineBundle, ToleranceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
    coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

/// Evenly spaced samples of a polygonal chain, at most `step` apart.
fn sample_chain(chain: &[Point], step: f64) -> Vec<Point> {
    let mut out = vec![chain[0]];
    for w in chain.windows(2) {
        let k = ((w[1].distance(w[0]) / step).ceil() as usize).max(1);
        out.extend((1..=k).map(|i| w[0] + (w[1] - w[0]) * (i as f64 / k as f64)));
    }
    out
}

/// Discrete Fréchet distance of dense samples of segment `ab` and `chain`.
/// Differs from the continuous distance by at most `step`.
pub fn sampled_frechet(a: Point, b: Point, chain: &[Point], step: f64) -> f64 {
    let p = sample_chain(&[a, b], step);
    let q = sample_chain(chain, step);
    let mut prev = vec![f64::INFINITY; q.len()];
    for (i, &pi) in p.iter().enumerate() {
        let mut row = vec![f64::INFINITY; q.len()];
        for (j, &qj) in q.iter().enumerate() {
            let d = pi.distance(qj);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => row[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(row[j - 1]),
            };
            row[j] = d.max(best);
        }
        prev = row;
    }
    prev[q.len() - 1]
}

/// Fewest bends of one polyline, by trying every interior subset in order
/// of size.
pub fn exhaustive_single_min(points: &[Point], tol: ToleranceSpec) -> usize {
    let n = points.len();
    let ok = |i: usize, j: usize| {
        frechet::segment_chain_within(points[i], points[j], &points[i..=j], tol.delta, tol.eps).unwrap()
    };
    for size in 0..=n.saturating_sub(2) {
        for inner in (1..n - 1).combinations(size) {
            let kept: Vec<usize> = std::iter::once(0).chain(inner).chain(std::iter::once(n - 1)).collect();
            if kept.windows(2).all(|w| ok(w[0], w[1])) {
                return kept.len();
            }
        }
    }
    unreachable!("keeping every bend is valid")
}

/// Minimum star cover size over all stars, not only maximal ones: every
/// central bend with every combination of incoming arms (or none) per
/// polyline through it.
pub fn exhaustive_star_cover(bundle: &PolylineBundle, tol: ToleranceSpec) -> usize {
    let mut universe: Vec<(usize, usize)> = Vec::new();
    for (pid, l) in bundle.polylines().iter().enumerate() {
        universe.extend((0..l.len() - 1).map(|s| (pid, s)));
    }
    let index = |pid: usize, s: usize| universe.iter().position(|&u| u == (pid, s)).unwrap();

    let mut sets: HashSet<Vec<usize>> = HashSet::new();
    for b in 0..bundle.num_bends() {
        let options: Vec<Vec<Option<(usize, usize, usize)>>> = bundle
            .occurrences(b)
            .iter()
            .map(|&(pid, pos)| {
                let chain = bundle.coordinates(pid);
                let mut arms = vec![None];
                for outer in 0..pos {
                    let ok = frechet::segment_chain_within(
                        chain[outer],
                        chain[pos],
                        &chain[outer..=pos],
                        tol.delta,
                        tol.eps,
                    )
                    .unwrap();
                    if ok {
                        arms.push(Some((pid, outer, pos)));
                    }
                }
                arms
            })
            .collect();
        for choice in options.into_iter().multi_cartesian_product() {
            let mut covered: Vec<usize> = choice
                .into_iter()
                .flatten()
                .flat_map(|(pid, from, to)| (from..to).map(move |s| (pid, s)))
                .map(|(pid, s)| index(pid, s))
                .collect();
            covered.sort_unstable();
            if !covered.is_empty() {
                sets.insert(covered);
            }
        }
    }
    let sets: Vec<BTreeSet<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    let mut limit = 0;
    loop {
        if cover_within(&sets, &mut vec![false; universe.len()], limit) {
            return limit;
        }
        limit += 1;
    }
}

fn cover_within(sets: &[BTreeSet<usize>], covered: &mut Vec<bool>, budget: usize) -> bool {
    let Some(first) = covered.iter().position(|c| !c) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for s in sets.iter().filter(|s| s.contains(&first)) {
        let newly: Vec<usize> = s.iter().copied().filter(|&e| !covered[e]).collect();
        for &e in &newly {
            covered[e] = true;
        }
        let found = cover_within(sets, covered, budget - 1);
        for &e in &newly {
            covered[e] = false;
        }
        if found {
            return true;
        }
    }
    false
}

/// A random polyline of `n` points with moderate turns.
pub fn random_polyline(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut at = Point::new(0.0, 0.0);
    let mut heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (0..n)
        .map(|i| {
            if i > 0 {
                heading += rng.gen_range(-1.5..1.5);
                at = at + Point::new(heading.cos(), heading.sin()) * rng.gen_range(0.2..2.0);
            }
            at
        })
        .collect()
}

pub fn single(points: Vec<Point>) -> PolylineBundle {
    let n = points.len();
    PolylineBundle::new(points, vec![(0..n).collect()]).unwrap()
}

/// A random bundle with at most `max_n` bends and `max_l` polylines, and a
/// threshold from one of three scales.
pub fn random_bundle(seed: u64, max_n: usize, max_l: usize) -> (PolylineBundle, ToleranceSpec) {
    let mut r = rng(seed ^ 0x5eed_0000);
    let l = r.gen_range(1..=max_l);
    let n = r.gen_range(2 * l..=max_n);
    let share = [0.0, 0.3, 0.6][r.gen_range(0..3)];
    let delta = [0.05, 0.4, 2.5][r.gen_range(0..3)];
    gen_random_bundle(seed, n, l, share, delta).unwrap()
}

/// Twenty seeded graphs with 2 to 5 vertices, at most `2n̂` edges and no
/// isolated vertex.
pub fn graph_corpus() -> Vec<Graph> {
    let mut r = rng(2024);
    (0..20)
        .map(|i| {
            let n = 2 + i % 4;
            let max_m = (2 * n).min(n * (n - 1) / 2);
            let mut edges = BTreeSet::new();
            for v in 0..n {
                if !edges.iter().any(|&(a, b)| a == v || b == v) {
                    let mut u = r.gen_range(0..n - 1);
                    if u >= v {
                        u += 1;
                    }
                    edges.insert((u.min(v), u.max(v)));
                }
            }
            let target = r.gen_range(edges.len()..=max_m.max(edges.len()));
            while edges.len() < target {
                let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
                if u != v {
                    edges.insert((u.min(v), u.max(v)));
                }
            }
            Graph::new(n, edges).unwrap()
        })
        .collect()
}

pub fn k2() -> Graph {
    Graph::new(2, [(0, 1)]).unwrap()
}
