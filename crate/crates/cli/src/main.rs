use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pbs_core::exact::{self, DEFAULT_MAX_K, DEFAULT_MAX_N};
use pbs_core::io::{self, RenderOptions};
use pbs_core::model::validate_simplification;
use pbs_core::reduction::{
    build_pbs_from_graph, verify_critical_distances, verify_gadget_claims_with, GadgetLayout, Graph, ReductionParams,
};
use pbs_core::shortcut::{self, per_polyline_simplify};
use pbs_core::star_cover::{self, bicriteria_simplify, Orientation};
use pbs_core::{PolylineBundle, ToleranceSpec};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pbs", version, about = "Consistent simplification of polyline bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    PerPolyline,
    GreedyStar,
    Fpt,
    Brute,
}

#[derive(Args)]
struct Tolerance {
    /// Overrides the threshold stored in the bundle file.
    #[arg(long)]
    delta: Option<f64>,
    /// Slack for distance comparisons; defaults to 1e-9 * delta.
    #[arg(long)]
    eps: Option<f64>,
}

impl Tolerance {
    fn apply(&self, stored: ToleranceSpec) -> Result<ToleranceSpec> {
        let delta = self.delta.unwrap_or(stored.delta);
        let tol = match (self.eps, self.delta) {
            (Some(eps), _) => ToleranceSpec::with_eps(delta, eps)?,
            (None, Some(_)) => ToleranceSpec::new(delta)?,
            (None, None) => stored,
        };
        Ok(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a simplification.
    Simplify {
        #[arg(long, value_enum, default_value = "greedy-star")]
        algo: Algo,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Direct every polyline from its last to its first bend.
        #[arg(long)]
        reverse_all: bool,
        /// Where to write run statistics as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerance,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Check a solution; exits with status 1 if it is invalid.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        /// Threshold multiplier.
        #[arg(long, default_value_t = 1.0)]
        factor: f64,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Build a bundle from a graph edge list.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        x_spacing: Option<f64>,
        /// Chain all gadgets into two polylines.
        #[arg(long)]
        two_polylines: bool,
        /// Also reject shortcut decisions within rounding noise.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        output: PathBuf,
        /// Where to write the gadget layout.
        #[arg(long)]
        meta: PathBuf,
    },
    /// Re-certify a built bundle against its layout.
    VerifyGadgets {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        meta: PathBuf,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate a random bundle.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total number of bends.
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        polylines: usize,
        #[arg(long, default_value_t = 0.3)]
        share: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw a bundle, optionally with a solution, as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 20.0)]
        scale: f64,
        #[arg(long, default_value_t = 1.5)]
        stroke_width: f64,
        #[arg(long)]
        hide_bends: bool,
    },
    /// Print instance statistics.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        tol: Tolerance,
    },
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, tol: &Tolerance) -> Result<(PolylineBundle, ToleranceSpec)> {
    let (bundle, stored) = io::parse_bundle(path).with_context(|| format!("reading {}", path.display()))?;
    Ok((bundle, tol.apply(stored)?))
}

fn simplify(
    algo: Algo,
    bundle: &PolylineBundle,
    tol: ToleranceSpec,
    reverse_all: bool,
    max_k: usize,
    max_n: usize,
) -> Result<(BTreeSet<usize>, serde_json::Value)> {
    let l = bundle.num_polylines();
    Ok(match algo {
        Algo::PerPolyline => {
            let (union, per) = per_polyline_simplify(bundle, tol);
            let sizes: Vec<usize> = per.iter().map(Vec::len).collect();
            let stats = json!({ "algo": "per-polyline", "size": union.len(), "per_polyline": sizes });
            (union, stats)
        }
        Algo::GreedyStar => {
            let orientation = if reverse_all { Orientation::reverse_all(l) } else { Orientation::forward(l) };
            let out = bicriteria_simplify(bundle, tol, &orientation);
            let stats = json!({
                "algo": "greedy-star",
                "t": out.stats.t,
                "w": out.stats.w,
                "cover_size": out.cover.len(),
                "size": out.retained.len(),
            });
            (out.retained, stats)
        }
        Algo::Fpt => {
            let out = exact::fpt_solve(bundle, tol, max_k)?;
            let stats = json!({
                "algo": "fpt",
                "k": out.stats.k,
                "subsets_searched": out.stats.subsets_searched,
                "optimum_size": out.stats.optimum_size,
            });
            (out.retained, stats)
        }
        Algo::Brute => {
            let out = exact::brute_force(bundle, tol, max_n)?;
            let stats = json!({ "algo": "brute", "optimum_size": out.len() });
            (out, stats)
        }
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simplify { algo, input, output, reverse_all, report, tol, max_k, max_n } => {
            let (bundle, tol) = load(&input, &tol)?;
            let (retained, stats) = simplify(algo, &bundle, tol, reverse_all, max_k, max_n)?;
            emit(output.as_deref(), &io::write_solution(&retained))?;
            if let Some(path) = report {
                emit(Some(&path), &format!("{}\n", serde_json::to_string_pretty(&stats)?))?;
            }
        }
        Command::Validate { input, solution, factor, tol } => {
            let (bundle, tol) = load(&input, &tol)?;
            let retained = io::parse_solution(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let report = validate_simplification(&bundle, tol, &retained, factor)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.valid {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Reduce { graph, delta, gamma, x_spacing, two_polylines, strict, output, meta } => {
            let text = std::fs::read_to_string(&graph).with_context(|| format!("reading {}", graph.display()))?;
            let g = Graph::parse_edge_list(&text)?;
            let mut params = ReductionParams::defaults(g.num_vertices(), delta);
            params.gamma = gamma.unwrap_or(params.gamma);
            params.x_spacing = x_spacing.unwrap_or(params.x_spacing);
            params.two_polyline_mode = two_polylines;
            let (bundle, layout) = build_pbs_from_graph(&g, &params)?;
            if strict {
                verify_gadget_claims_with(&bundle, &layout, true)?;
            }
            emit(Some(&output), &io::write_bundle(&bundle, ToleranceSpec::new(delta)?))?;
            emit(Some(&meta), &serde_json::to_string_pretty(&layout)?)?;
            eprintln!(
                "{} bends, {} polylines, {} shared bends",
                bundle.num_bends(),
                bundle.num_polylines(),
                bundle.shared_bends().len()
            );
        }
        Command::VerifyGadgets { bundle, meta, strict, report } => {
            let (b, _) = io::parse_bundle(&bundle).with_context(|| format!("reading {}", bundle.display()))?;
            let text = std::fs::read_to_string(&meta).with_context(|| format!("reading {}", meta.display()))?;
            let layout: GadgetLayout = serde_json::from_str(&text).context("parsing layout")?;
            let claims = verify_gadget_claims_with(&b, &layout, strict)?;
            let distances = verify_critical_distances(&b, &layout)?;
            let out = json!({ "claims": claims, "distances": distances });
            eprintln!("{} gadgets, {} distances certified", claims.gadgets.len(), distances.records.len());
            if let Some(path) = report {
                emit(Some(&path), &format!("{}\n", serde_json::to_string_pretty(&out)?))?;
            }
        }
        Command::Gen { seed, n, polylines, share, delta, output } => {
            let (bundle, tol) = io::gen_random_bundle(seed, n, polylines, share, delta)?;
            emit(output.as_deref(), &io::write_bundle(&bundle, tol))?;
        }
        Command::Render { input, solution, output, scale, stroke_width, hide_bends } => {
            let (bundle, _) = io::parse_bundle(&input).with_context(|| format!("reading {}", input.display()))?;
            let retained = solution
                .map(|p| io::parse_solution(&p).with_context(|| format!("reading {}", p.display())))
                .transpose()?;
            if let Some(r) = &retained {
                pbs_core::Simplification::new(&bundle, r.clone())?;
            }
            let opts = RenderOptions { scale, stroke_width, show_bends: !hide_bends, ..RenderOptions::default() };
            emit(output.as_deref(), &io::render_svg(&bundle, retained.as_ref(), &opts))?;
        }
        Command::Stats { input, tol } => {
            let (bundle, tol) = load(&input, &tol)?;
            let graphs = shortcut::build_all(&bundle, tol);
            let cs = star_cover::cover_stats(&bundle, &graphs);
            let stats = json!({
                "bends": bundle.num_bends(),
                "polylines": bundle.num_polylines(),
                "shared_bends": bundle.shared_bends().len(),
                "shortcuts": graphs.iter().map(|g| g.num_edges()).sum::<usize>(),
                "t": cs.t,
                "w": cs.w,
                "delta": tol.delta,
            });
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PBS_THREADS") {
        let n: usize = v.parse().with_context(|| format!("PBS_THREADS = {v:?} is not a number"))?;
        if n == 0 {
            bail!("PBS_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
