//! `pathcount` — exact counting and uniform sampling of cliques, labelings,
//! and stable matchings on graphs of bounded pathwidth.
//!
//! Output is deterministic: identical arguments and input files produce
//! byte-identical output. Counts are emitted as decimal strings, never as
//! native JSON numbers. Vertices and persons are 1-indexed everywhere in
//! the CLI, matching the file formats.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use pathcount::decomposition::{
    exact_decomposition, find_decomposition_with_budget, greedy_decomposition, to_nice, Budget,
    NicePathDecomposition, PathDecomposition,
};
use pathcount::engine;
use pathcount::graph::{generate, Graph};
use pathcount::matching::{
    build_rotation_digraph, gen_k_range, range_of, RotationDigraph, SmInstance, SmSampler,
};
use pathcount::oracle::{
    enumerate_cliques, enumerate_stable_matchings, enumerate_valid_labelings, exact_pathwidth,
    EnumerationBudget,
};
use pathcount::problems::LabelingProblem;

#[derive(Parser)]
#[command(
    name = "pathcount",
    about = "Exact counting and uniform sampling on path decompositions",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Wall-clock budget for exact decomposition search, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Input graph in .gr format.
    #[arg(long)]
    graph: PathBuf,
    /// Decomposition source: `exact`, `greedy`, or a path to a .pd file.
    #[arg(long, default_value = "greedy")]
    decomp: String,
}

#[derive(Args)]
struct ProblemArg {
    /// Labeling problem: `coloring:<c>`, `indep`, `downset`, or
    /// `custom:<path>` (predicate file).
    #[arg(long)]
    problem: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a path decomposition and print it in .pd format.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        /// With `--decomp exact`: fail unless width <= this bound.
        #[arg(long)]
        max_width: Option<usize>,
    },
    /// Count valid labelings of a graph.
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        problem: ProblemArg,
    },
    /// Sample uniformly random valid labelings.
    Sample {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        problem: ProblemArg,
        /// RNG seed; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Clique counting and sampling.
    #[command(subcommand)]
    Cliques(CliqueCommand),
    /// Stable matching operations on .sm instances.
    #[command(subcommand)]
    Sm(SmCommand),
    /// Generate a graph family and print it in .gr format.
    Gen {
        /// Family: path, cycle, complete, grid, chain-dag, antichain-dag.
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
    },
    /// Brute-force reference computations (debugging aid).
    #[command(subcommand, hide = true)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum CliqueCommand {
    /// Count the nonempty cliques.
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        /// Include the per-vertex counts in the output.
        #[arg(long)]
        per_vertex: bool,
    },
    /// Sample uniformly random nonempty cliques.
    Sample {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
}

#[derive(Args)]
struct InstanceArg {
    /// Stable matching instance in .sm format.
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Subcommand)]
enum SmCommand {
    /// Count the stable matchings exactly.
    Count {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Sample uniformly random stable matchings.
    Sample {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Print the rotations and the rotation digraph.
    Rotations {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Print the range (smallest k for which the instance is k-range).
    Range {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Generate a random k-range instance and print it in .sm format.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Count valid labelings by exhaustive scan.
    Labelings {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        problem: String,
    },
    /// Count cliques by exhaustive subset scan.
    Cliques {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exact pathwidth by the vertex-separation table.
    Pathwidth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Count stable matchings by scanning all permutations.
    Matchings {
        #[arg(long)]
        instance: PathBuf,
    },
}

struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn new(kind: &'static str, message: impl Into<String>) -> CliError {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

macro_rules! domain_error_from {
    ($($ty:ty => $kind:expr),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                CliError::new($kind, e.to_string())
            }
        })*
    };
}

domain_error_from! {
    pathcount::cliques::CliqueError => "cliques",
    pathcount::graph::ParseError => "graph-parse",
    pathcount::graph::GraphError => "graph",
    pathcount::graph::DagError => "dag",
    pathcount::decomposition::PdParseError => "pd-parse",
    pathcount::decomposition::InvalidDecomposition => "decomposition",
    pathcount::decomposition::BudgetExceeded => "budget",
    pathcount::problems::ProblemError => "problem",
    pathcount::engine::EngineError => "engine",
    pathcount::matching::SmError => "sm",
    pathcount::oracle::OracleBudgetExceeded => "oracle-budget",
}

/// Everything the CLI prints: text body plus the JSON document (rendered
/// immediately so struct field order is preserved).
struct Output {
    text: String,
    json: String,
}

fn output<T: Serialize>(doc: &T, text: String) -> Output {
    Output {
        text,
        json: serde_json::to_string_pretty(doc).expect("output documents serialize"),
    }
}

#[derive(Serialize)]
struct GraphInfo {
    path: String,
    n: usize,
    m: usize,
    directed: bool,
}

#[derive(Serialize)]
struct DecompositionInfo {
    source: String,
    width: usize,
    /// The decomposition as a .pd document, echoed when the source is
    /// `exact` so a run can be reproduced with `--decomp <file>`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pd: Option<String>,
}

#[derive(Serialize)]
struct DecomposeDoc {
    command: &'static str,
    graph: GraphInfo,
    decomposition: DecompositionInfo,
    pd: String,
}

#[derive(Serialize)]
struct CountDoc {
    command: &'static str,
    graph: GraphInfo,
    problem: String,
    decomposition: DecompositionInfo,
    count: String,
}

#[derive(Serialize)]
struct SampleDoc {
    command: &'static str,
    graph: GraphInfo,
    problem: String,
    decomposition: DecompositionInfo,
    seed: u64,
    /// One entry per sample: labels in vertex order, space-separated.
    samples: Vec<String>,
}

#[derive(Serialize)]
struct CliqueCountDoc {
    command: &'static str,
    graph: GraphInfo,
    decomposition: DecompositionInfo,
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_vertex: Option<Vec<String>>,
}

#[derive(Serialize)]
struct CliqueSampleDoc {
    command: &'static str,
    graph: GraphInfo,
    decomposition: DecompositionInfo,
    seed: u64,
    /// One entry per sample: 1-indexed vertices of the clique.
    samples: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct InstanceInfo {
    path: String,
    n: usize,
}

#[derive(Serialize)]
struct SmCountDoc {
    command: &'static str,
    instance: InstanceInfo,
    rotations: usize,
    digraph_edges: usize,
    count: String,
}

#[derive(Serialize)]
struct SmSampleDoc {
    command: &'static str,
    instance: InstanceInfo,
    seed: u64,
    /// One entry per sample: woman matched to each man, 1-indexed, in man
    /// order, space-separated.
    samples: Vec<String>,
}

#[derive(Serialize)]
struct RotationDoc {
    /// (man, woman) pairs, 1-indexed.
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SmRotationsDoc {
    command: &'static str,
    instance: InstanceInfo,
    man_optimal: String,
    woman_optimal: String,
    rotations: Vec<RotationDoc>,
    /// Edges of the rotation digraph as 1-indexed rotation pairs
    /// (predecessor, successor).
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct SmRangeDoc {
    command: &'static str,
    instance: InstanceInfo,
    range: usize,
}

#[derive(Serialize)]
struct SmGenDoc {
    command: &'static str,
    n: usize,
    k: usize,
    seed: u64,
    instance: String,
}

#[derive(Serialize)]
struct GenDoc {
    command: &'static str,
    family: String,
    n: usize,
    m: usize,
    graph: String,
}

#[derive(Serialize)]
struct OracleDoc {
    command: &'static str,
    count: String,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: &'a str,
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::new("io", format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &PathBuf) -> Result<(Graph, GraphInfo), CliError> {
    let text = read_file(path)?;
    let graph = Graph::parse(&text)?;
    let info = GraphInfo {
        path: path.display().to_string(),
        n: graph.n(),
        m: graph.m(),
        directed: graph.is_directed(),
    };
    Ok((graph, info))
}

fn load_instance(path: &PathBuf) -> Result<(SmInstance, InstanceInfo), CliError> {
    let text = read_file(path)?;
    let inst = SmInstance::parse(&text)?;
    let info = InstanceInfo {
        path: path.display().to_string(),
        n: inst.n(),
    };
    Ok((inst, info))
}

fn search_budget(budget_ms: Option<u64>) -> Budget {
    Budget {
        max_millis: budget_ms,
        ..Budget::default()
    }
}

/// Resolve the `--decomp` flag: the keywords `exact`/`greedy`, anything
/// else is a .pd file path.
fn resolve_decomposition(
    g: &Graph,
    spec: &str,
    budget_ms: Option<u64>,
) -> Result<(PathDecomposition, DecompositionInfo), CliError> {
    let (pd, source) = match spec {
        "exact" => (exact_decomposition(g, &search_budget(budget_ms))?, "exact"),
        "greedy" => (greedy_decomposition(g), "greedy"),
        path => {
            let path = PathBuf::from(path);
            let text = read_file(&path)?;
            let (pd, n) = PathDecomposition::parse(&text)?;
            if n != g.n() {
                return Err(CliError::new(
                    "pd-parse",
                    format!(".pd file declares {n} vertices, graph has {}", g.n()),
                ));
            }
            (pd, "file")
        }
    };
    let width = pathcount::decomposition::validate(g, &pd)
        .map_err(pathcount::decomposition::InvalidDecomposition)?;
    let info = DecompositionInfo {
        source: source.to_string(),
        width,
        pd: (source == "exact").then(|| pd.to_pd(g.n())),
    };
    Ok((pd, info))
}

fn nice_decomposition(g: &Graph, pd: &PathDecomposition) -> Result<NicePathDecomposition, CliError> {
    Ok(to_nice(g, pd)?)
}

fn parse_problem(spec: &str) -> Result<LabelingProblem, CliError> {
    if let Some(c) = spec.strip_prefix("coloring:") {
        let c: usize = c
            .parse()
            .map_err(|_| CliError::new("problem", format!("bad alphabet size in `{spec}`")))?;
        return Ok(LabelingProblem::coloring(c)?);
    }
    if let Some(path) = spec.strip_prefix("custom:") {
        let text = read_file(&PathBuf::from(path))?;
        return Ok(LabelingProblem::parse(&text, format!("custom:{path}"))?);
    }
    match spec {
        "indep" => Ok(LabelingProblem::independent_set()),
        "downset" => Ok(LabelingProblem::downset()),
        _ => Err(CliError::new(
            "problem",
            format!("unknown problem `{spec}`; expected coloring:<c>, indep, downset, or custom:<path>"),
        )),
    }
}

/// Independent per-sample generator: one seed, one stream per index.
fn sample_rng(seed: u64, index: usize) -> ChaCha12Rng {
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn labels_line(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn matching_line(m: &pathcount::matching::Matching) -> String {
    labels_line(&m.pairs().iter().map(|&w| w + 1).collect::<Vec<_>>())
}

fn oracle_cli_budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Decompose { graph, max_width } => {
            let (g, info) = load_graph(&graph.graph)?;
            if max_width.is_some() && graph.decomp != "exact" {
                return Err(CliError::new(
                    "decomposition",
                    "--max-width only applies with --decomp exact",
                ));
            }
            let (pd, dinfo) = match (*max_width, graph.decomp.as_str()) {
                (Some(bound), "exact") => {
                    let found =
                        find_decomposition_with_budget(&g, bound, &search_budget(cli.budget_ms))?;
                    let pd = found.ok_or_else(|| {
                        CliError::new("decomposition", format!("pathwidth exceeds {bound}"))
                    })?;
                    let width = pathcount::decomposition::validate(&g, &pd)
                        .map_err(pathcount::decomposition::InvalidDecomposition)?;
                    let info = DecompositionInfo {
                        source: "exact".to_string(),
                        width,
                        pd: Some(pd.to_pd(g.n())),
                    };
                    (pd, info)
                }
                _ => resolve_decomposition(&g, &graph.decomp, cli.budget_ms)?,
            };
            let pd_text = pd.to_pd(g.n());
            let doc = DecomposeDoc {
                command: "decompose",
                graph: info,
                decomposition: dinfo,
                pd: pd_text.clone(),
            };
            Ok(output(&doc, pd_text))
        }
        Command::Count { graph, problem } => {
            let (g, info) = load_graph(&graph.graph)?;
            let prob = parse_problem(&problem.problem)?;
            let (pd, dinfo) = resolve_decomposition(&g, &graph.decomp, cli.budget_ms)?;
            let npd = nice_decomposition(&g, &pd)?;
            let count = engine::count_valid_labelings(&g, &npd, &prob)?;
            let text = format!("{count}\n");
            let doc = CountDoc {
                command: "count",
                graph: info,
                problem: prob.name().to_string(),
                decomposition: dinfo,
                count: count.to_string(),
            };
            Ok(output(&doc, text))
        }
        Command::Sample {
            graph,
            problem,
            seed,
            samples,
        } => {
            let (g, info) = load_graph(&graph.graph)?;
            let prob = parse_problem(&problem.problem)?;
            let (pd, dinfo) = resolve_decomposition(&g, &graph.decomp, cli.budget_ms)?;
            let npd = nice_decomposition(&g, &pd)?;
            let trace = engine::trace(&g, &npd, &prob)?;
            let mut lines = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let labeling = trace.sample(&mut sample_rng(*seed, i))?;
                lines.push(labels_line(labeling.values()));
            }
            let text = lines.iter().fold(String::new(), |mut acc, l| {
                writeln!(acc, "{l}").unwrap();
                acc
            });
            let doc = SampleDoc {
                command: "sample",
                graph: info,
                problem: prob.name().to_string(),
                decomposition: dinfo,
                seed: *seed,
                samples: lines,
            };
            Ok(output(&doc, text))
        }
        Command::Cliques(CliqueCommand::Count { graph, per_vertex }) => {
            let (g, info) = load_graph(&graph.graph)?;
            let (pd, dinfo) = resolve_decomposition(&g, &graph.decomp, cli.budget_ms)?;
            let npd = nice_decomposition(&g, &pd)?;
            let counts = pathcount::cliques::count_cliques(&g, &npd)?;
            let text = format!("{}\n", counts.total());
            let doc = CliqueCountDoc {
                command: "cliques-count",
                graph: info,
                decomposition: dinfo,
                count: counts.total().to_string(),
                per_vertex: per_vertex
                    .then(|| counts.per_vertex().iter().map(|c| c.to_string()).collect()),
            };
            Ok(output(&doc, text))
        }
        Command::Cliques(CliqueCommand::Sample {
            graph,
            seed,
            samples,
        }) => {
            let (g, info) = load_graph(&graph.graph)?;
            let (pd, dinfo) = resolve_decomposition(&g, &graph.decomp, cli.budget_ms)?;
            let npd = nice_decomposition(&g, &pd)?;
            let mut out = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let clique = pathcount::cliques::sample_clique(&g, &npd, &mut sample_rng(*seed, i))?;
                out.push(clique.iter().map(|v| v + 1).collect::<Vec<usize>>());
            }
            let text = out.iter().fold(String::new(), |mut acc, c| {
                writeln!(acc, "{}", labels_line(c)).unwrap();
                acc
            });
            let doc = CliqueSampleDoc {
                command: "cliques-sample",
                graph: info,
                decomposition: dinfo,
                seed: *seed,
                samples: out,
            };
            Ok(output(&doc, text))
        }
        Command::Sm(SmCommand::Count { instance }) => {
            let (inst, info) = load_instance(&instance.instance)?;
            let rd = build_rotation_digraph(&inst);
            let count = pathcount::matching::count_stable_matchings(&inst)?;
            let text = format!("{count}\n");
            let doc = SmCountDoc {
                command: "sm-count",
                instance: info,
                rotations: rd.rotations().len(),
                digraph_edges: rd.edges().len(),
                count: count.to_string(),
            };
            Ok(output(&doc, text))
        }
        Command::Sm(SmCommand::Sample {
            instance,
            seed,
            samples,
        }) => {
            let (inst, info) = load_instance(&instance.instance)?;
            let sampler = SmSampler::new(&inst)?;
            let mut lines = Vec::with_capacity(*samples);
            for i in 0..*samples {
                let m = sampler.sample(&mut sample_rng(*seed, i))?;
                lines.push(matching_line(&m));
            }
            let text = lines.iter().fold(String::new(), |mut acc, l| {
                writeln!(acc, "{l}").unwrap();
                acc
            });
            let doc = SmSampleDoc {
                command: "sm-sample",
                instance: info,
                seed: *seed,
                samples: lines,
            };
            Ok(output(&doc, text))
        }
        Command::Sm(SmCommand::Rotations { instance }) => {
            let (inst, info) = load_instance(&instance.instance)?;
            let rd = build_rotation_digraph(&inst);
            let doc = sm_rotations_doc(&rd, info);
            let mut text = String::new();
            writeln!(text, "man-optimal:   {}", doc.man_optimal).unwrap();
            writeln!(text, "woman-optimal: {}", doc.woman_optimal).unwrap();
            for (i, r) in doc.rotations.iter().enumerate() {
                let pairs: Vec<String> = r
                    .pairs
                    .iter()
                    .map(|(m, w)| format!("({m},{w})"))
                    .collect();
                writeln!(text, "rotation {}: {}", i + 1, pairs.join(" ")).unwrap();
            }
            for (a, b) in &doc.edges {
                writeln!(text, "edge: {a} -> {b}").unwrap();
            }
            Ok(output(&doc, text))
        }
        Command::Sm(SmCommand::Range { instance }) => {
            let (inst, info) = load_instance(&instance.instance)?;
            let range = range_of(&inst)?;
            let doc = SmRangeDoc {
                command: "sm-range",
                instance: info,
                range,
            };
            Ok(output(&doc, format!("{range}\n")))
        }
        Command::Sm(SmCommand::Gen { n, k, seed }) => {
            let inst = gen_k_range(*n, *k, &mut sample_rng(*seed, 0))?;
            let text = inst.to_sm();
            let doc = SmGenDoc {
                command: "sm-gen",
                n: *n,
                k: *k,
                seed: *seed,
                instance: text.clone(),
            };
            Ok(output(&doc, text))
        }
        Command::Gen {
            family,
            n,
            rows,
            cols,
        } => {
            let need_n = || {
                n.ok_or_else(|| CliError::new("gen", format!("family `{family}` needs --n")))
            };
            let g = match family.as_str() {
                "path" => generate::path(need_n()?)?,
                "cycle" => generate::cycle(need_n()?)?,
                "complete" => generate::complete(need_n()?)?,
                "chain-dag" => generate::chain_dag(need_n()?)?,
                "antichain-dag" => generate::antichain_dag(need_n()?)?,
                "grid" => {
                    let rows = rows
                        .ok_or_else(|| CliError::new("gen", "grid needs --rows and --cols"))?;
                    let cols = cols
                        .ok_or_else(|| CliError::new("gen", "grid needs --rows and --cols"))?;
                    generate::grid(rows, cols)?
                }
                _ => {
                    return Err(CliError::new(
                        "gen",
                        format!("unknown family `{family}`; expected path, cycle, complete, grid, chain-dag, or antichain-dag"),
                    ))
                }
            };
            let text = g.to_gr();
            let doc = GenDoc {
                command: "gen",
                family: family.clone(),
                n: g.n(),
                m: g.m(),
                graph: text.clone(),
            };
            Ok(output(&doc, text))
        }
        Command::Oracle(cmd) => run_oracle(cmd),
    }
}

fn sm_rotations_doc(rd: &RotationDigraph, info: InstanceInfo) -> SmRotationsDoc {
    let full: Vec<usize> = (0..rd.rotations().len()).collect();
    let woman_optimal = rd
        .downset_to_matching(&full)
        .expect("full rotation set is a downset");
    SmRotationsDoc {
        command: "sm-rotations",
        instance: info,
        man_optimal: matching_line(rd.man_optimal()),
        woman_optimal: matching_line(&woman_optimal),
        rotations: rd
            .rotations()
            .iter()
            .map(|r| RotationDoc {
                pairs: r.pairs().iter().map(|&(m, w)| (m + 1, w + 1)).collect(),
            })
            .collect(),
        edges: rd.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
    }
}

fn run_oracle(cmd: &OracleCommand) -> Result<Output, CliError> {
    let (command, count): (&'static str, BigUint) = match cmd {
        OracleCommand::Labelings { graph, problem } => {
            let (g, _) = load_graph(graph)?;
            let prob = parse_problem(problem)?;
            let labs = enumerate_valid_labelings(&g, &prob, &oracle_cli_budget())?;
            ("oracle-labelings", labs.len().into())
        }
        OracleCommand::Cliques { graph } => {
            let (g, _) = load_graph(graph)?;
            let cliques = enumerate_cliques(&g, &oracle_cli_budget())?;
            ("oracle-cliques", cliques.len().into())
        }
        OracleCommand::Pathwidth { graph } => {
            let (g, _) = load_graph(graph)?;
            let pw = exact_pathwidth(&g, &oracle_cli_budget())?;
            ("oracle-pathwidth", pw.into())
        }
        OracleCommand::Matchings { instance } => {
            let (inst, _) = load_instance(instance)?;
            let matchings = enumerate_stable_matchings(&inst, &oracle_cli_budget())?;
            ("oracle-matchings", matchings.len().into())
        }
    };
    let doc = OracleDoc {
        command,
        count: count.to_string(),
    };
    Ok(output(&doc, format!("{count}\n")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if cli.json {
                let doc = ErrorDoc {
                    error: ErrorBody {
                        kind: err.kind,
                        message: &err.message,
                    },
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            } else {
                eprintln!("error ({}): {}", err.kind, err.message);
            }
            ExitCode::from(1)
        }
    }
}
