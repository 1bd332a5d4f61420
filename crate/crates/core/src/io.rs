//! JSON files, random instances and SVG rendering.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::model::{BendId, ModelError, Point, PolylineBundle, ToleranceSpec};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{what}: line {line}, column {column}: {message}")]
    Parse { what: &'static str, line: usize, column: usize, message: String },
    #[error("invalid instance: {0}")]
    InvariantViolation(#[from] ModelError),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleFile {
    delta: f64,
    #[serde(default)]
    eps: Option<f64>,
    bends: Vec<[f64; 2]>,
    polylines: Vec<Vec<BendId>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    retained: Vec<BendId>,
}

fn parse_json<'a, T: Deserialize<'a>>(what: &'static str, text: &'a str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        what,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.to_owned(), source })
}

/// Parses a bundle document. An optional `"eps"` field overrides the
/// default slack.
pub fn parse_bundle_str(text: &str) -> Result<(PolylineBundle, ToleranceSpec), IoError> {
    let file: BundleFile = parse_json("bundle", text)?;
    let tol = match file.eps {
        Some(eps) => ToleranceSpec::with_eps(file.delta, eps)?,
        None => ToleranceSpec::new(file.delta)?,
    };
    let bends = file.bends.into_iter().map(|[x, y]| Point::new(x, y)).collect();
    Ok((PolylineBundle::new(bends, file.polylines)?, tol))
}

pub fn parse_bundle(path: &Path) -> Result<(PolylineBundle, ToleranceSpec), IoError> {
    parse_bundle_str(&read(path)?)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a bundle with every coordinate at 17 significant digits.
pub fn write_bundle(bundle: &PolylineBundle, tol: ToleranceSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"delta\": {},", num(tol.delta));
    if tol != ToleranceSpec::new(tol.delta).expect("valid tolerance") {
        let _ = writeln!(out, "  \"eps\": {},", num(tol.eps));
    }
    out.push_str("  \"bends\": [");
    for (i, p) in bundle.bends().iter().enumerate() {
        let sep = if i == 0 { "\n" } else { ",\n" };
        let _ = write!(out, "{sep}    [{}, {}]", num(p.x), num(p.y));
    }
    out.push_str("\n  ],\n  \"polylines\": [");
    for (i, line) in bundle.polylines().iter().enumerate() {
        let sep = if i == 0 { "\n" } else { ",\n" };
        let ids: Vec<String> = line.iter().map(ToString::to_string).collect();
        let _ = write!(out, "{sep}    [{}]", ids.join(", "));
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn parse_solution_str(text: &str) -> Result<BTreeSet<BendId>, IoError> {
    let file: SolutionFile = parse_json("solution", text)?;
    Ok(file.retained.into_iter().collect())
}

pub fn parse_solution(path: &Path) -> Result<BTreeSet<BendId>, IoError> {
    parse_solution_str(&read(path)?)
}

pub fn write_solution(retained: &BTreeSet<BendId>) -> String {
    let ids: Vec<String> = retained.iter().map(ToString::to_string).collect();
    format!("{{\"retained\": [{}]}}\n", ids.join(", "))
}

/// `ℓ` random-walk polylines over `n` bends in total. Every polyline after
/// the first reuses a contiguous run of an earlier polyline's bends, of
/// length about `share_fraction` times its own fresh bends, sometimes in
/// reverse. Bends are laid out around that run so the result looks like a
/// road map with shared stretches.
pub fn gen_random_bundle(
    seed: u64,
    n: usize,
    num_polylines: usize,
    share_fraction: f64,
    delta: f64,
) -> Result<(PolylineBundle, ToleranceSpec), IoError> {
    if num_polylines == 0 || n < 2 * num_polylines {
        return Err(IoError::InfeasibleParameters(format!(
            "need n >= 2 * polylines, got n = {n}, polylines = {num_polylines}"
        )));
    }
    if !(0.0..=1.0).contains(&share_fraction) {
        return Err(IoError::InfeasibleParameters(format!("share fraction {share_fraction} outside [0, 1]")));
    }
    let tol = ToleranceSpec::new(delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut fresh = vec![2usize; num_polylines];
    for _ in 0..n - 2 * num_polylines {
        fresh[rng.gen_range(0..num_polylines)] += 1;
    }

    let mut bends: Vec<Point> = Vec::with_capacity(n);
    let mut polylines: Vec<Vec<BendId>> = Vec::with_capacity(num_polylines);
    let extent = 4.0 * delta * (n as f64).sqrt();
    for (p, &count) in fresh.iter().enumerate() {
        let shared: Vec<BendId> = if p == 0 {
            Vec::new()
        } else {
            let want = (share_fraction * count as f64).round() as usize;
            let source = &polylines[rng.gen_range(0..p)];
            let len = want.min(source.len());
            let start = rng.gen_range(0..=source.len() - len);
            let mut run = source[start..start + len].to_vec();
            if rng.gen_bool(0.5) {
                run.reverse();
            }
            run
        };
        let before = if shared.is_empty() { 0 } else { rng.gen_range(0..=count) };

        let mut line: Vec<BendId> = Vec::with_capacity(count + shared.len());
        fn push(bends: &mut Vec<Point>, line: &mut Vec<BendId>, pt: Point) {
            bends.push(pt);
            line.push(bends.len() - 1);
        }
        let walk_from = match (shared.first(), shared.last()) {
            (Some(&first), Some(&last)) => {
                // Prefix walks backwards from the run's start.
                let anchor = bends[first];
                for pt in random_walk(&mut rng, anchor, before, delta).into_iter().rev() {
                    push(&mut bends, &mut line, pt);
                }
                line.extend(&shared);
                bends[last]
            }
            _ => {
                let origin = Point::new(rng.gen_range(0.0..extent), rng.gen_range(0.0..extent));
                push(&mut bends, &mut line, origin);
                origin
            }
        };
        let remaining = count - (line.len() - shared.len());
        for pt in random_walk(&mut rng, walk_from, remaining, delta) {
            push(&mut bends, &mut line, pt);
        }
        polylines.push(line);
    }
    Ok((PolylineBundle::new(bends, polylines)?, tol))
}

/// `steps` points of a walk starting next to (not at) `from`, with step
/// lengths between `0.3δ` and `2δ` and a slowly turning heading.
fn random_walk(rng: &mut ChaCha8Rng, from: Point, steps: usize, delta: f64) -> Vec<Point> {
    let mut heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut at = from;
    (0..steps)
        .map(|_| {
            heading += rng.gen_range(-1.2..1.2);
            let len = rng.gen_range(0.3..2.0) * delta;
            at = at + Point::new(heading.cos(), heading.sin()) * len;
            at
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// Pixels per unit.
    pub scale: f64,
    pub stroke_width: f64,
    pub bend_radius: f64,
    /// Draw bends as circles.
    pub show_bends: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { scale: 20.0, stroke_width: 1.5, bend_radius: 3.0, show_bends: true }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"];

/// SVG drawing of `bundle`; with `retained`, the simplified polylines are
/// overlaid and dropped bends drawn hollow.
pub fn render_svg(bundle: &PolylineBundle, retained: Option<&BTreeSet<BendId>>, opts: &RenderOptions) -> String {
    let (lo, hi) = bundle.bends().iter().fold(
        (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
    );
    let size = hi - lo;
    let margin = 0.05 * size.x.max(size.y).max(f64::MIN_POSITIVE);
    let (w, h) = ((size.x + 2.0 * margin) * opts.scale, (size.y + 2.0 * margin) * opts.scale);
    let tx = |p: Point| ((p.x - lo.x + margin) * opts.scale, (hi.y - p.y + margin) * opts.scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">"
    );
    let draw = |out: &mut String, pts: &[Point], style: &str| {
        if let [a, b] = pts {
            let ((x1, y1), (x2, y2)) = (tx(*a), tx(*b));
            let _ = writeln!(out, "  <line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" {style}/>");
        } else {
            let d: Vec<String> = pts
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let (x, y) = tx(p);
                    format!("{}{x:.3} {y:.3}", if i == 0 { "M" } else { "L" })
                })
                .collect();
            let _ = writeln!(out, "  <path d=\"{}\" fill=\"none\" {style}/>", d.join(" "));
        }
    };

    for (pid, line) in bundle.polylines().iter().enumerate() {
        let pts: Vec<Point> = line.iter().map(|&b| bundle.bend(b)).collect();
        let color = PALETTE[pid % PALETTE.len()];
        let opacity = if retained.is_some() { 0.4 } else { 1.0 };
        draw(
            &mut out,
            &pts,
            &format!("stroke=\"{color}\" stroke-width=\"{}\" stroke-opacity=\"{opacity}\"", opts.stroke_width),
        );
    }
    if let Some(kept) = retained {
        for line in bundle.polylines() {
            let pts: Vec<Point> = line.iter().filter(|b| kept.contains(b)).map(|&b| bundle.bend(b)).collect();
            if pts.len() >= 2 {
                draw(&mut out, &pts, &format!("stroke=\"#d62728\" stroke-width=\"{}\"", opts.stroke_width * 1.5));
            }
        }
    }
    if opts.show_bends {
        for (b, &p) in bundle.bends().iter().enumerate() {
            let (x, y) = tx(p);
            let filled = retained.is_none_or(|k| k.contains(&b));
            let fill = if filled { "black" } else { "white" };
            let _ = writeln!(
                out,
                "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{}\" fill=\"{fill}\" stroke=\"black\"/>",
                opts.bend_radius
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
