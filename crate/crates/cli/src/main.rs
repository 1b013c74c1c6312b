//! `almgren`: generate graphs, solve Dirichlet problems, and evaluate the
//! discrete frequency and cube boundary energies from the command line.
//!
//! Data goes to the file named by `-o`; a one-line JSON summary goes to stdout.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use discrete_almgren::almgren::{self, DEFAULT_TOL_MONO};
use discrete_almgren::cube_energy::{self, EnergyOptions, DEFAULT_QUAD_ORDER};
use discrete_almgren::generators;
use discrete_almgren::harmonic::{self, SolveOptions, SolverMethod, DEFAULT_MAX_ITER, DEFAULT_TOL};
use discrete_almgren::io;
use discrete_almgren::layers::layer_decompose;
use discrete_almgren::random::{random_connected_graph, RandomGraphSpec};
use discrete_almgren::{Graph, HarmonicPolynomial, ScalarField};

/// Exit status when a verification runs cleanly but its check fails.
const EXIT_CHECK_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "almgren",
    version,
    about = "Discrete Almgren frequency toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph (tree, lattice, edge list or random) as JSON.
    Gen(GenArgs),
    /// Solve a Dirichlet problem and write the field as JSON.
    Solve(SolveArgs),
    /// Write the frequency series of a field as CSV.
    Freq(FieldArgs),
    /// Check nonnegativity and monotonicity of the frequency series.
    Verify(FieldArgs),
    /// Evaluate the additive doubling bounds on a layer range.
    Doubling(DoublingArgs),
    /// Frequency series of the bounded harmonic function on the 3-regular tree.
    TreeExample(TreeArgs),
    /// Boundary energy of a harmonic polynomial on cubes, with derivative parts.
    CubeEnergy(CubeArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    Tree {
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long)]
        depth: usize,
    },
    Lattice {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        radius: usize,
    },
    EdgeList {
        #[arg(long)]
        input: PathBuf,
    },
    Random {
        #[arg(long, default_value_t = 30)]
        vertices: usize,
        #[arg(long, default_value_t = 8)]
        extra_edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cg,
    GaussSeidel,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    boundary: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = Method::Cg)]
    method: Method,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    field: PathBuf,
    #[arg(long, default_value_t = 0)]
    base: usize,
    #[arg(long, default_value_t = DEFAULT_TOL_MONO)]
    tol_mono: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DoublingArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    a: usize,
    #[arg(long)]
    b: usize,
}

#[derive(Args)]
struct TreeArgs {
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = DEFAULT_TOL_MONO)]
    tol_mono: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CubeArgs {
    #[arg(long)]
    dim: usize,
    /// Sum of terms like `c*x1^a1*...*xd^ad`; variables x,y,z,w or x1..x4.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, default_value_t = 0.25)]
    tmin: f64,
    #[arg(long, default_value_t = 4.0)]
    tmax: f64,
    #[arg(long, default_value_t = 64)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    quad_order: usize,
    #[arg(long)]
    allow_non_harmonic: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome { summary, code }) => {
            println!("{summary}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

struct Outcome {
    summary: Value,
    code: u8,
}

impl Outcome {
    fn ok(summary: Value) -> Self {
        Self { summary, code: 0 }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Solve(args) => solve(args),
        Command::Freq(args) => freq(args, "freq"),
        Command::Verify(args) => {
            let mut out = freq(args, "verify")?;
            if out.summary["pass"] == Value::Bool(false) {
                out.code = EXIT_CHECK_FAILED;
            }
            Ok(out)
        }
        Command::Doubling(args) => doubling(args),
        Command::TreeExample(args) => tree_example(args),
        Command::CubeEnergy(args) => cube(args),
    }
}

fn distinct(output: Option<&Path>, inputs: &[&Path]) -> Result<()> {
    if let Some(out) = output {
        if inputs.contains(&out) {
            bail!(
                "-o {}: output path must differ from every input",
                out.display()
            );
        }
    }
    Ok(())
}

fn path_value(p: Option<&Path>) -> Value {
    p.map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("-o {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn load_graph(path: &Path) -> Result<Graph> {
    io::load_graph(path).context("--graph")
}

fn gen(args: GenArgs) -> Result<Outcome> {
    let (graph, base, family) = match &args.family {
        Family::Tree { degree, depth } => {
            let g = generators::gen_tree(*degree, *depth).context("gen tree")?;
            (g.graph, g.base, "tree")
        }
        Family::Lattice { dim, radius } => {
            let g = generators::gen_lattice(*dim, *radius).context("gen lattice")?;
            (g.graph, g.base, "lattice")
        }
        Family::EdgeList { input } => {
            distinct(args.output.as_deref(), &[input])?;
            let g = io::load_edge_list(input).context("--input")?;
            (g, 0, "edge-list")
        }
        Family::Random {
            vertices,
            extra_edges,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let spec = RandomGraphSpec {
                vertices: *vertices,
                extra_edges: *extra_edges,
                ..RandomGraphSpec::default()
            };
            (
                random_connected_graph(&mut rng, spec).context("gen random")?,
                0,
                "random",
            )
        }
    };
    if let Some(out) = &args.output {
        io::write_file(out, io::graph_to_json(&graph))
            .with_context(|| format!("-o {}", out.display()))?;
    }
    Ok(Outcome::ok(json!({
        "command": "gen",
        "family": family,
        "vertex_count": graph.vertex_count(),
        "edge_count": graph.edge_count(),
        "base": base,
        "frontier_size": graph.frontier().len(),
        "warnings": graph.warnings().len(),
        "output": path_value(args.output.as_deref()),
    })))
}

fn solve(args: SolveArgs) -> Result<Outcome> {
    distinct(Some(&args.output), &[&args.graph, &args.boundary])?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        bail!("--tol {}: must be positive", args.tol);
    }
    let graph = load_graph(&args.graph)?;
    let boundary = io::load_boundary(&args.boundary).context("--boundary")?;
    let opts = SolveOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        method: match args.method {
            Method::Cg => SolverMethod::ConjugateGradient,
            Method::GaussSeidel => SolverMethod::GaussSeidel,
        },
    };
    let sol = harmonic::solve_dirichlet(&graph, &boundary, opts)
        .with_context(|| format!("--boundary {}", args.boundary.display()))?;
    io::write_file(&args.output, io::field_to_json(&sol.field))
        .with_context(|| format!("-o {}", args.output.display()))?;
    Ok(Outcome::ok(json!({
        "command": "solve",
        "iterations": sol.iterations,
        "max_residual": sol.field.max_residual,
        "interior": sol.field.interior_vertices().count(),
        "output": args.output.display().to_string(),
    })))
}

fn load_inputs(args: &FieldArgs) -> Result<(Graph, ScalarField)> {
    distinct(args.output.as_deref(), &[&args.graph, &args.field])?;
    let graph = load_graph(&args.graph)?;
    graph
        .check_vertex(args.base)
        .with_context(|| format!("--base {}", args.base))?;
    let mut field = io::load_field(&args.field, graph.vertex_count()).context("--field")?;
    harmonic::residual(&graph, &mut field)
        .with_context(|| format!("--field {}", args.field.display()))?;
    Ok((graph, field))
}

fn freq(args: FieldArgs, command: &str) -> Result<Outcome> {
    let (graph, field) = load_inputs(&args)?;
    let dec =
        layer_decompose(&graph, args.base).with_context(|| format!("--base {}", args.base))?;
    let series = match almgren::frequency_series(&dec, &field, args.tol_mono) {
        Ok(s) => s,
        Err(almgren::AlmgrenError::EmptyHorizon) => {
            return Ok(Outcome::ok(json!({
                "command": command,
                "horizon": Value::Null,
                "pass": Value::Null,
                "max_residual": field.max_residual,
                "note": "no layer qualifies for the validity horizon",
                "output": Value::Null,
            })))
        }
        Err(e) => return Err(e).context("frequency series"),
    };
    if let Some(out) = &args.output {
        series
            .write_csv(create(out)?)
            .with_context(|| format!("-o {}", out.display()))?;
    }
    let report = almgren::verify_monotone(&series);
    Ok(Outcome::ok(json!({
        "command": command,
        "horizon": series.horizon,
        "pass": report.pass,
        "min_n": report.min_value,
        "min_n_at": report.min_value_at,
        "min_dn": report.min_increment,
        "min_dn_at": report.min_increment_at,
        "threshold": report.threshold,
        "max_residual": field.max_residual,
        "output": path_value(args.output.as_deref()),
    })))
}

fn doubling(args: DoublingArgs) -> Result<Outcome> {
    let fa = &args.field;
    let (graph, field) = load_inputs(fa)?;
    let dec = layer_decompose(&graph, fa.base).with_context(|| format!("--base {}", fa.base))?;
    let series =
        almgren::frequency_series(&dec, &field, fa.tol_mono).context("frequency series")?;
    let report = almgren::doubling_check(&dec, &series, args.a, args.b)
        .with_context(|| format!("--a {} --b {}", args.a, args.b))?;
    if let Some(out) = &fa.output {
        let text = serde_json::to_string(&report)?;
        io::write_file(out, text).with_context(|| format!("-o {}", out.display()))?;
    }
    let mut summary = serde_json::to_value(&report)?;
    summary["command"] = json!("doubling");
    summary["horizon"] = json!(series.horizon);
    summary["pass"] = json!(report.holds());
    summary["output"] = path_value(fa.output.as_deref());
    Ok(Outcome::ok(summary))
}

fn tree_example(args: TreeArgs) -> Result<Outcome> {
    let mut ex = harmonic::tree_example_field(args.depth).context("--depth")?;
    harmonic::residual(&ex.graph, &mut ex.field)?;
    let dec = layer_decompose(&ex.graph, ex.base)?;
    let series = almgren::frequency_series(&dec, &ex.field, args.tol_mono)?;
    if let Some(out) = &args.output {
        series
            .write_csv(create(out)?)
            .with_context(|| format!("-o {}", out.display()))?;
    }
    let closed_form_error = series
        .n
        .iter()
        .enumerate()
        .map(|(k, &n)| (n - (8.0 - 3.0 * 2f64.powi(1 - k as i32))).abs())
        .fold(0.0, f64::max);
    let report = almgren::verify_monotone(&series);
    Ok(Outcome::ok(json!({
        "command": "tree-example",
        "horizon": series.horizon,
        "pass": report.pass && closed_form_error <= 1e-12,
        "max_closed_form_error": closed_form_error,
        "min_n": report.min_value,
        "min_dn": report.min_increment,
        "max_residual": ex.field.max_residual,
        "output": path_value(args.output.as_deref()),
    })))
}

fn cube(args: CubeArgs) -> Result<Outcome> {
    let p = HarmonicPolynomial::parse(args.dim, &args.poly)
        .with_context(|| format!("--poly {:?}", args.poly))?;
    let opts = EnergyOptions {
        quad_order: args.quad_order,
        allow_non_harmonic: args.allow_non_harmonic,
    };
    let curve = cube_energy::energy_curve(&p, args.tmin, args.tmax, args.steps, opts)
        .with_context(|| format!("--poly {:?}", args.poly))?;
    if let Some(out) = &args.output {
        cube_energy::write_curve_csv(&p, &curve, opts, create(out)?)
            .with_context(|| format!("-o {}", out.display()))?;
    }
    Ok(Outcome::ok(json!({
        "command": "cube-energy",
        "harmonic": p.is_continuum_harmonic,
        "pass": curve.is_convex(1e-8),
        "min_second_diff": curve.min_second_diff(),
        "max_energy": curve.max_energy(),
        "points": curve.t_grid.len(),
        "output": path_value(args.output.as_deref()),
    })))
}
