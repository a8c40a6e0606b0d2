use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cohesion::experiments::{run_experiment_with_threads, ExperimentConfig, ExperimentId};
use cohesion::generators::GraphSpec;
use cohesion::graph::{from_edge_list, is_connected, parse_edge_list, to_edge_list};
use cohesion::spectra::{bound_report, laplacian, matrix_to_csv, spectrum, spectrum_to_csv};
use cohesion::{Error, Graph, LaplacianKind};

const EXIT_TARGET_MISS: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cohesion-lab",
    version,
    about = "Spectral cohesion experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian spectrum, algebraic connectivity and bounds of one graph.
    Spectra(SpectraArgs),
    /// Mean cohesion of the rewired cluster networks and learning-curve fits.
    Table1(RunArgs),
    /// One of fig1, fig3, fig4a, fig4b, fig4c, fig4d, fig5.
    Figures {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Memory-convergence round protocol.
    Appendix(RunArgs),
    /// Any registered experiment, including `anchors`.
    Run {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Prints the edge list of a generated graph.
    Generate {
        /// Generator spec, e.g. `ring_lattice:24,4`, `rewired:0.2`, `poisson:30,0.3`.
        spec: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<LaplacianKind>,
    /// Output directory (default `out/<experiment>`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (0 = one per core). Does not affect results.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct SpectraArgs {
    /// Edge-list file, or a generator spec such as `clique:24`.
    source: String,
    #[arg(long, value_parser = parse_kind, default_value = "binary")]
    kind: LaplacianKind,
    /// Seed for stochastic generator specs.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Read the edge list as directed (symmetrized by intersection).
    #[arg(long)]
    directed: bool,
    /// Skip the bound report.
    #[arg(long)]
    no_bounds: bool,
    /// Also write laplacian.csv, spectrum.csv and bounds.json here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<LaplacianKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Io(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Spectra(args) => cmd_spectra(&args),
        Command::Table1(run) => cmd_run(ExperimentId::Table1, &run),
        Command::Appendix(run) => cmd_run(ExperimentId::Appendix, &run),
        Command::Figures { id, run } => match id.parse::<ExperimentId>() {
            Ok(id) if ExperimentId::FIGURES.contains(&id) => cmd_run(id, &run),
            _ => Err(Failure::Precondition(format!(
                "unknown figure '{id}' (known: fig1, fig3, fig4a, fig4b, fig4c, fig4d, fig5)"
            ))),
        },
        Command::Run { id, run } => id
            .parse::<ExperimentId>()
            .map_err(Failure::from)
            .and_then(|id| cmd_run(id, &run)),
        Command::Generate { spec, seed, out } => cmd_generate(&spec, seed, out.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}

fn load_graph(source: &str, directed: bool, seed: u64) -> Result<Graph, Failure> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read {source}: {e}")))?;
        let (g, _) = if directed {
            parse_edge_list(&text, true)?
        } else {
            from_edge_list(&text)?
        };
        return Ok(g);
    }
    match source.parse::<GraphSpec>() {
        Ok(spec) => Ok(spec.build(seed)?),
        Err(_) => Err(Failure::Io(format!(
            "cannot read {source}: no such file, and not a generator spec"
        ))),
    }
}

fn cmd_spectra(args: &SpectraArgs) -> Result<u8, Failure> {
    let g = load_graph(&args.source, args.directed, args.seed)?;
    if g.node_count() < 2 {
        return Err(Failure::Precondition("graph needs at least 2 nodes".into()));
    }
    let s = spectrum(&g, args.kind)?;
    let connected = is_connected(&g);
    let lambda2 = if connected { s.lambda2() } else { 0.0 };
    let unit = if g.is_directed() { "arcs" } else { "ties" };
    println!("nodes = {}, {unit} = {}", g.node_count(), g.edge_count());
    println!("lambda2 ({}) = {lambda2:.4}  [{lambda2}]", args.kind);
    println!("lambda_max = {}", s.lambda_max());
    println!("zero eigenvalues = {}", s.zero_multiplicity());
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(e.to_string()))?;
        write(
            dir,
            "laplacian.csv",
            &matrix_to_csv(&laplacian(&g, args.kind)?, args.kind),
        )?;
        write(dir, "spectrum.csv", &spectrum_to_csv(&s))?;
    }
    if args.no_bounds {
        return Ok(0);
    }
    if !connected {
        return Err(Failure::Precondition(
            "bounds refused: the graph is disconnected".into(),
        ));
    }
    let b = bound_report(&g)?;
    println!("bounds (binary Laplacian, lambda2 = {}):", b.lambda2);
    println!(
        "  mean distance {:.6}: lambda2 >= {:.6} .. {}",
        b.mean_distance,
        b.eq5_bound,
        ok(b.satisfied.mean_distance)
    );
    println!(
        "  diameter {}: lambda2 >= {:.6} .. {}",
        b.diameter,
        b.diameter_bound,
        ok(b.satisfied.diameter)
    );
    match (b.satisfied.kappa, b.satisfied.k_min) {
        (Some(kp), Some(km)) => println!(
            "  lambda2 <= kappa = {} .. {}; kappa <= k_min = {} .. {}",
            b.kappa,
            ok(kp),
            b.k_min,
            ok(km)
        ),
        _ => println!("  complete graph: connectivity bounds not applicable"),
    }
    if let Some(dir) = &args.out {
        let json = serde_json::to_string_pretty(&b).map_err(|e| Failure::Io(e.to_string()))?;
        write(dir, "bounds.json", &(json + "\n"))?;
    }
    Ok(0)
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "VIOLATED"
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    std::fs::write(dir.join(name), contents).map_err(|e| Failure::Io(format!("{name}: {e}")))
}

fn build_config(id: ExperimentId, run: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let mut config = match &run.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            let c = ExperimentConfig::from_json(&text)?;
            if c.experiment != id {
                return Err(Failure::Precondition(format!(
                    "config is for '{}', not '{id}'",
                    c.experiment
                )));
            }
            c
        }
        None => ExperimentConfig::new(id),
    };
    if let Some(seed) = run.seed {
        config.seed = seed;
    }
    if let Some(reps) = run.reps {
        config.reps = Some(reps);
    }
    if let Some(kind) = run.kind {
        config.kind = Some(kind);
    }
    if let Some(out) = &run.out {
        config.out_dir = Some(out.display().to_string());
    }
    Ok(config)
}

fn cmd_run(id: ExperimentId, run: &RunArgs) -> Result<u8, Failure> {
    let config = build_config(id, run)?;
    let dir = config
        .out_dir
        .clone()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new("out").join(id.as_str()));
    let start = Instant::now();
    let output = run_experiment_with_threads(&config, run.threads)?;
    let elapsed = start.elapsed();
    output.write(&dir)?;
    let report = &output.report;
    println!(
        "{id}: seed {}, reps {}, kind {}",
        config.seed, report.reps, report.kind
    );
    for t in &report.targets {
        println!(
            "  {} {:<34} observed {:<12.6} expected {} ({:?})",
            if t.pass { "PASS" } else { "FAIL" },
            t.target.id,
            t.observed,
            t.target.expected,
            t.target.check
        );
    }
    println!("outputs in {}", dir.display());
    eprintln!("wall-clock {:.2}s", elapsed.as_secs_f64());
    Ok(if report.passed { 0 } else { EXIT_TARGET_MISS })
}

fn cmd_generate(spec: &str, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let g = spec.parse::<GraphSpec>()?.build(seed)?;
    let text = to_edge_list(&g, None);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}
