//! The `unknot-kit` command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a mesh fails
//! validation or a computation cannot be completed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use unknot_kit::analysis::{
    boundary_graph_of_surface_seeded, genus_and_boundary, isotopy_signature_seeded, validate_properly_embedded,
    BallDomain, HYPOTHESIS_NOTE,
};
use unknot_kit::arrangement::{sphere_boundary_graph_seeded, SphericalLoop};
use unknot_kit::mesh::{read_obj_file, write_obj, TriMesh};
use unknot_kit::model::{generate_model, ModelError, ModelSurfaceSpec, SCHEMA};
use unknot_kit::shrinker::{builtin_shrinker, default_steps, graph_at_infinity_seeded, ShrinkerError, ShrinkerKind};
use unknot_kit::tree::{ahu_code, cayley_lower_bound, enumerate_free_trees, parse_tree, to_dot, Tree};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}

#[derive(Debug, Parser)]
#[command(
    name = "unknot-kit",
    version,
    about = "Boundary graphs and model surfaces in the ball"
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for reference points and slice jitter.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the model surface of a tree and genus as OBJ, with a JSON sidecar.
    Generate(GenerateArgs),
    /// Validate a mesh and report its signature.
    Analyze {
        obj: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        ball_radius: f64,
    },
    /// Boundary graph of a mesh, or of loops given one JSON array per line.
    BoundaryGraph {
        input: PathBuf,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compare the signatures of two meshes.
    IsotopyCheck { first: PathBuf, second: PathBuf },
    /// List the trees on n vertices up to isomorphism.
    EnumerateTrees { n: usize },
    /// Slice a surface with spheres and report the graph at infinity.
    ShrinkerGraph(ShrinkerArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Tree as nested parentheses, such as "(()()())".
    #[arg(long)]
    pub tree: String,
    #[arg(long, default_value_t = 0)]
    pub genus: usize,
    #[arg(long)]
    pub root: Option<usize>,
    #[arg(long, default_value_t = ModelSurfaceSpec::DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, default_value_t = ModelSurfaceSpec::DEFAULT_SHRINK)]
    pub shrink: f64,
    #[arg(long)]
    pub no_symmetric: bool,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ShrinkerArgs {
    /// plane, sphere2 or cylinder2.
    #[arg(long, conflicts_with = "mesh", required_unless_present = "mesh")]
    pub builtin: Option<ShrinkerKind>,
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    #[arg(long)]
    pub rmin: f64,
    #[arg(long)]
    pub rmax: f64,
    /// Number of radii (default: spaced by a ratio of about 1.3).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Truncation radius of builtin surfaces.
    #[arg(long, default_value_t = 16.0)]
    pub extent: f64,
    /// Segments per circle of builtin surfaces.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
}

/// A failed command: its exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
    }
}

fn invalid(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

/// Output of a successful command: JSON document and human-readable text.
struct Output {
    json: Value,
    text: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(usage(e)),
        },
        None => execute(&cli),
    };
    match result {
        Ok(o) => {
            let written = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.json).expect("json output"))
            } else {
                write!(out, "{}", o.text)
            };
            if written.is_err() {
                return 1;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs the command line on the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let seed = cli.seed;
    match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze { obj, ball_radius } => analyze(obj, *ball_radius, seed),
        Command::BoundaryGraph { input, dot } => boundary(input, dot.as_deref(), seed),
        Command::IsotopyCheck { first, second } => isotopy(first, second, seed),
        Command::EnumerateTrees { n } => enumerate(*n),
        Command::ShrinkerGraph(a) => shrinker(a, seed),
    }
}

fn load(path: &Path) -> Result<TriMesh, Failure> {
    read_obj_file(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Sidecar path of an OBJ file: same stem, `.json` extension.
pub fn sidecar_path(obj: &Path) -> PathBuf {
    obj.with_extension("json")
}

fn generate(a: &GenerateArgs) -> Result<Output, Failure> {
    let tree = parse_tree(&a.tree).map_err(usage)?;
    let mut spec = ModelSurfaceSpec::new(tree, a.genus)
        .with_resolution(a.resolution)
        .with_shrink(a.shrink)
        .with_symmetric(!a.no_symmetric);
    spec.root_vertex = a.root;
    let model = generate_model(&spec).map_err(|e| match e {
        ModelError::InvalidSpec(_) => usage(e),
        _ => invalid(e),
    })?;
    let sidecar = sidecar_path(&a.output);
    fs::write(&a.output, write_obj(&model.mesh)).map_err(|e| usage(format!("{}: {e}", a.output.display())))?;
    fs::write(&sidecar, model.sidecar_json() + "\n").map_err(|e| usage(format!("{}: {e}", sidecar.display())))?;
    let loops = model.mesh.boundary_loops().map(|l| l.len()).unwrap_or(0);
    let json = json!({
        "schema": SCHEMA,
        "command": "generate",
        "obj": a.output.display().to_string(),
        "sidecar": sidecar.display().to_string(),
        "vertices": model.mesh.vertex_count(),
        "triangles": model.mesh.triangle_count(),
        "boundary_loops": loops,
        "genus": a.genus,
        "tree": ahu_code(&spec.tree).as_str(),
    });
    let text = format!(
        "wrote {} ({} vertices, {} triangles, {} boundary loops) and {}\n",
        a.output.display(),
        model.mesh.vertex_count(),
        model.mesh.triangle_count(),
        loops,
        sidecar.display()
    );
    Ok(Output::ok(json, text))
}

fn analyze(obj: &Path, radius: f64, seed: u64) -> Result<Output, Failure> {
    let ball = BallDomain::new(radius).map_err(usage)?;
    let mesh = load(obj)?;
    let report = validate_properly_embedded(&mesh, &ball);
    let topology = genus_and_boundary(&mesh).ok();
    let signature = if report.properly_embedded {
        Some(isotopy_signature_seeded(&mesh, &ball, seed).map_err(invalid)?)
    } else {
        None
    };
    let json = json!({
        "schema": SCHEMA,
        "command": "analyze",
        "report": report,
        "genus": topology.map(|t| t.0),
        "boundary_loops": topology.map(|t| t.1),
        "signature": signature.as_ref().map(|s| s.to_string()),
    });
    let mut text = format!(
        "properly embedded: {}\nself-intersecting: {}\nconnected: {}\norientable: {}\nboundary error: {:e}\ninterior clearance: {:e}\n",
        report.properly_embedded,
        report.self_intersecting,
        report.connected,
        report.orientable,
        report.margins.boundary_error,
        report.margins.interior_clearance
    );
    for item in &report.offending_items {
        text += &format!("offending {:?}: {} items\n", item.kind, item.indices.len());
    }
    if let Some(s) = &signature {
        text += &format!("signature: {s}\n");
    }
    Ok(Output {
        json,
        text,
        code: if report.properly_embedded { 0 } else { 2 },
    })
}

fn read_loops(path: &Path) -> Result<Vec<SphericalLoop>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let points: Vec<[f64; 3]> =
                serde_json::from_str(l).map_err(|e| usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
            Ok(SphericalLoop::projected(points.into_iter().map(|p| p.into())))
        })
        .collect()
}

fn tree_json(tree: &Tree) -> Value {
    json!({
        "code": ahu_code(tree).as_str(),
        "vertex_count": tree.vertex_count(),
        "edges": tree.edges(),
    })
}

fn boundary(input: &Path, dot: Option<&Path>, seed: u64) -> Result<Output, Failure> {
    let is_loops = matches!(input.extension().and_then(|e| e.to_str()), Some("jsonl" | "json"));
    let tree = if is_loops {
        let loops = read_loops(input)?;
        sphere_boundary_graph_seeded(&loops, seed).map_err(invalid)?
    } else {
        boundary_graph_of_surface_seeded(&load(input)?, &BallDomain::unit(), seed).map_err(invalid)?
    };
    if let Some(dot) = dot {
        fs::write(dot, to_dot(tree.as_multigraph(), "boundary"))
            .map_err(|e| usage(format!("{}: {e}", dot.display())))?;
    }
    let mut json = tree_json(&tree);
    json["schema"] = json!(SCHEMA);
    json["command"] = json!("boundary-graph");
    let text = format!(
        "tree: {}\nvertices: {}\nedges: {}\n",
        ahu_code(&tree),
        tree.vertex_count(),
        tree.edges()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(Output::ok(json, text))
}

fn isotopy(first: &Path, second: &Path, seed: u64) -> Result<Output, Failure> {
    let ball = BallDomain::unit();
    let a = isotopy_signature_seeded(&load(first)?, &ball, seed)
        .map_err(|e| invalid(format!("{}: {e}", first.display())))?;
    let b = isotopy_signature_seeded(&load(second)?, &ball, seed)
        .map_err(|e| invalid(format!("{}: {e}", second.display())))?;
    let equivalent = a == b;
    let json = json!({
        "schema": SCHEMA,
        "command": "isotopy-check",
        "result": equivalent,
        "first": a.to_string(),
        "second": b.to_string(),
        "note": HYPOTHESIS_NOTE,
    });
    let text = format!(
        "{}\nfirst: {a}\nsecond: {b}\nnote: {HYPOTHESIS_NOTE}\n",
        if equivalent { "equivalent" } else { "NOT equivalent" }
    );
    Ok(Output::ok(json, text))
}

fn enumerate(n: usize) -> Result<Output, Failure> {
    let trees = enumerate_free_trees(n).map_err(usage)?;
    let bound = if n >= 1 {
        Some(cayley_lower_bound(n).to_string())
    } else {
        None
    };
    let json = json!({
        "schema": SCHEMA,
        "command": "enumerate-trees",
        "n": n,
        "count": trees.len(),
        "cayley_lower_bound": bound,
        "trees": trees.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
    });
    let mut text: String = trees.iter().map(|c| format!("{c}\n")).collect();
    text += &format!("count: {}\n", trees.len());
    if let Some(b) = bound {
        text += &format!("cayley lower bound: {b}\n");
    }
    Ok(Output::ok(json, text))
}

fn shrinker(a: &ShrinkerArgs, seed: u64) -> Result<Output, Failure> {
    let classify = |e: ShrinkerError| match e {
        ShrinkerError::Range(_) | ShrinkerError::Resolution(_) | ShrinkerError::Extent(_) => usage(e),
        _ => invalid(e),
    };
    let (mesh, source) = match (&a.builtin, &a.mesh) {
        (Some(kind), _) => (
            builtin_shrinker(*kind, a.extent, a.resolution).map_err(classify)?,
            json!({ "builtin": kind, "extent": a.extent, "resolution": a.resolution }),
        ),
        (None, Some(path)) => (load(path)?, json!({ "mesh": path.display().to_string() })),
        (None, None) => return Err(usage("one of --builtin or --mesh is required")),
    };
    let steps = a.steps.unwrap_or_else(|| default_steps(a.rmin, a.rmax));
    let report = graph_at_infinity_seeded(&mesh, a.rmin, a.rmax, steps, seed).map_err(classify)?;
    let json = json!({
        "schema": SCHEMA,
        "command": "shrinker-graph",
        "source": source,
        "report": report,
        "tree": report.graph_at_infinity.as_ref().map(|c| c.as_str()),
    });
    let mut text = String::new();
    for (r, g) in report.radii_tested.iter().zip(&report.graphs) {
        text += &format!("R = {r}: {g}\n");
    }
    text += &format!("stabilized: {}\n", report.stabilized);
    if let (Some(g), Some(r0)) = (&report.graph_at_infinity, report.r0_estimate) {
        text += &format!(
            "graph at infinity: {g} ({} vertices), from R = {r0} (estimate)\n",
            g.vertex_count()
        );
    }
    text += &format!("mesh truncated at radius {}\n", report.truncation_radius);
    Ok(Output::ok(json, text))
}
