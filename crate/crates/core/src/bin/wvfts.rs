//! Command line front end: generate instances, build spanners, verify them,
//! print statistics, and render pictures.
//!
//! Exit status is 0 on success, 1 when a verification or invariant check
//! fails, and 2 on bad input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wvfts::generate::{points_in_box, points_in_domain, shape};
use wvfts::geodesic::GeodesicEngine;
use wvfts::io::{
    default_t_bound, parse_instance, parse_spanner, read_text, run_build_checked, run_verify,
    to_canonical_json, write_text, Instance, IoError, IoResult,
};
use wvfts::svg::render_svg;
use wvfts::verify::{invariant_suite, size_report, Artifact, CheckMode, Metric, DEFAULT_TRIALS};
use wvfts::SpannerError;

#[derive(Parser)]
#[command(
    name = "wvfts",
    version,
    about = "Vertex fault-tolerant spanners for weighted points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMode {
    Rd,
    Polygon,
    Domain,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Build a spanner for an instance.
    Build(BuildArgs),
    /// Check the fault-tolerant stretch of a spanner.
    Verify(VerifyArgs),
    /// Print size statistics and re-check edge lengths.
    Stats(StatsArgs),
    /// Render an instance and optionally its spanner as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "rd")]
    mode: GenMode,
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// Dimension of rd instances.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Named shape for polygon and domain instances, e.g. star-20 or square-holes-2.
    #[arg(long)]
    shape: Option<String>,
    /// Weight range as `lo,hi`.
    #[arg(long, default_value = "0,1")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct BuildArgs {
    instance: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Use refined projection sets in polygons.
    #[arg(long)]
    refine: bool,
    /// Recorded in the output for provenance; the construction is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: String,
    spanner: String,
    /// Fault budget to check; defaults to the k the spanner was built for.
    #[arg(long)]
    k: Option<usize>,
    /// Stretch bound; defaults to the bound certified for the build.
    #[arg(long)]
    t_bound: Option<f64>,
    /// Check every removal set (the default unless --trials is given).
    #[arg(long, conflicts_with = "trials")]
    exhaustive: bool,
    /// Sample this many removal sets instead.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<String>,
}

#[derive(Args)]
struct StatsArgs {
    instance: String,
    spanner: String,
}

#[derive(Args)]
struct RenderArgs {
    instance: String,
    #[arg(long)]
    spanner: Option<String>,
    /// Comma separated vertex ids to cross out.
    #[arg(long, value_delimiter = ',')]
    removed: Vec<usize>,
    #[arg(short, long)]
    output: Option<String>,
}

fn emit(output: &Option<String>, text: &str) -> IoResult<()> {
    match output {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn input_error(msg: impl Into<String>) -> IoError {
    IoError::Spanner(SpannerError::InvalidInput(msg.into()))
}

fn load_instance(path: &str) -> IoResult<Instance> {
    parse_instance(&read_text(path)?)
}

fn gen(a: &GenArgs) -> IoResult<bool> {
    let (lo, hi) = a
        .weights
        .split_once(',')
        .and_then(|(l, h)| Some((l.trim().parse::<f64>().ok()?, h.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| {
            input_error(format!(
                "weights must look like `lo,hi`, got `{}`",
                a.weights
            ))
        })?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let instance = match a.mode {
        GenMode::Rd => Instance::rd(points_in_box(a.n, a.dim, (lo, hi), &mut rng)?),
        GenMode::Polygon | GenMode::Domain => {
            let default = if matches!(a.mode, GenMode::Polygon) {
                "star-20"
            } else {
                "square-hole"
            };
            let dom = shape(a.shape.as_deref().unwrap_or(default), &mut rng)?;
            if matches!(a.mode, GenMode::Polygon) && dom.hole_count() > 0 {
                return Err(input_error("polygon mode needs a shape without holes"));
            }
            let pts = points_in_domain(&dom, a.n, (lo, hi), &mut rng)?;
            Instance::in_domain(dom, pts)
        }
    };
    emit(&a.output, &instance.to_json())?;
    Ok(true)
}

fn build(a: &BuildArgs) -> IoResult<bool> {
    let instance = load_instance(&a.instance)?;
    let (file, violations) = run_build_checked(&instance, a.k, a.eps, a.refine, a.seed)?;
    emit(&a.output, &file.to_json())?;
    let size = size_report(&file.graph(), a.k, file.n, a.eps, instance.hole_count());
    eprintln!(
        "edges {} max degree {} |E|/(kn) {:.3}",
        size.edges, size.max_degree, size.per_kn
    );
    for v in &violations {
        eprintln!("invariant violated: {}: {}", v.invariant, v.detail);
    }
    Ok(violations.is_empty())
}

fn verify(a: &VerifyArgs) -> IoResult<bool> {
    let instance = load_instance(&a.instance)?;
    let spanner = parse_spanner(&read_text(&a.spanner)?)?;
    let k = a.k.unwrap_or(spanner.params.k);
    let t_bound = a
        .t_bound
        .unwrap_or_else(|| default_t_bound(&spanner.params));
    let mode = match a.trials {
        Some(trials) => CheckMode::Sampled {
            seed: a.seed,
            trials,
        },
        None => CheckMode::Exhaustive,
    };
    let doc = match run_verify(&instance, &spanner, k, t_bound, mode) {
        Err(IoError::Spanner(e @ SpannerError::OverBudget { .. })) => {
            return Err(input_error(format!("{e}; try --trials {DEFAULT_TRIALS}")));
        }
        other => other?,
    };
    emit(&a.output, &to_canonical_json(&doc))?;
    let r = &doc.report;
    eprintln!(
        "{} k {} t {} max stretch {} over {} removal sets",
        if doc.pass { "PASS" } else { "FAIL" },
        k,
        t_bound,
        r.max_stretch,
        r.removal_sets
    );
    if let Some(w) = &r.witness {
        eprintln!("witness: removed {:?} pair ({}, {})", w.removed, w.p, w.q);
    }
    Ok(doc.pass)
}

fn stats(a: &StatsArgs) -> IoResult<bool> {
    let instance = load_instance(&a.instance)?;
    let spanner = parse_spanner(&read_text(&a.spanner)?)?;
    if spanner.n != instance.points.len() {
        return Err(input_error("spanner and instance disagree on n"));
    }
    let graph = spanner.graph();
    let p = &spanner.params;
    let report = size_report(&graph, p.k, spanner.n, p.eps, instance.hole_count());
    print!("{}", to_canonical_json(&report));
    let engine = instance
        .domain
        .as_ref()
        .map(|d| GeodesicEngine::new(d.clone()))
        .transpose()?;
    let metric = engine.as_ref().map_or(Metric::Euclidean, Metric::Geodesic);
    let violations = invariant_suite(&Artifact::Spanner {
        graph: &graph,
        points: &instance.points,
        metric,
    });
    for v in &violations {
        eprintln!("invariant violated: {}: {}", v.invariant, v.detail);
    }
    Ok(violations.is_empty())
}

fn render(a: &RenderArgs) -> IoResult<bool> {
    let instance = load_instance(&a.instance)?;
    let graph = match &a.spanner {
        Some(path) => Some(parse_spanner(&read_text(path)?)?.graph()),
        None => None,
    };
    if let Some(&v) = a.removed.iter().find(|&&v| v >= instance.points.len()) {
        return Err(input_error(format!("removed vertex {v} does not exist")));
    }
    emit(
        &a.output,
        &render_svg(&instance, graph.as_ref(), &a.removed),
    )?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Build(a) => build(a),
        Command::Verify(a) => verify(a),
        Command::Stats(a) => stats(a),
        Command::Render(a) => render(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
