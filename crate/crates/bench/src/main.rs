use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchembed::embedding::{embed_graph, write_embedding, EmbeddingConfig, WalkMethod};
use matchembed::exact::solve_exact;
use matchembed::graph::{parse_graph, write_graph, write_matching};
use matchembed::greedy::{greedy_match, TiePolicy};
use matchembed::pipeline::{approx_match, SurrogateMatcher};
use matchembed::ObjectiveKind;
use matchembed_bench::spec::{Cell, GeneratorKind, NameList};
use matchembed_bench::{read_trials_csv, run_experiment, write_outputs, BenchError, RawSpec};

#[derive(Parser)]
#[command(name = "matchembed", version, about = "Graph matching via random-walk embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Generate an instance in the text graph format.
    Gen(GenArgs),
    /// Solve a matching problem exactly or heuristically.
    Solve(SolveArgs),
    /// Embed the vertices of a graph.
    Embed(EmbedArgs),
    /// Run a seeded experiment and write CSV/SVG results.
    Bench(BenchArgs),
    /// Summarize and plot an existing trials CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_generator)]
    generator: GeneratorKind,
    /// Adversarial level.
    #[arg(long, default_value_t = 5)]
    t: u32,
    #[arg(long, default_value_t = matchembed::generators::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Lomax shape.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long)]
    bipartite: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Heuristic {
    Exact,
    Greedy,
    Deepwalk,
    Node2vec,
}

#[derive(Args, Clone)]
struct EmbeddingArgs {
    #[arg(long)]
    dimensions: Option<usize>,
    #[arg(long)]
    walks_per_node: Option<usize>,
    #[arg(long)]
    walk_length: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// inverse, exp_decay or uniform.
    #[arg(long)]
    similarity: Option<String>,
    #[arg(long)]
    knn: Option<usize>,
}

impl EmbeddingArgs {
    fn config(&self, method: WalkMethod) -> Result<EmbeddingConfig, BenchError> {
        let raw = self.raw();
        let mut spec = matchembed_bench::ExperimentSpec::default();
        raw.apply(&mut spec)?;
        let config = EmbeddingConfig { method, ..spec.embedding };
        config.validate().map_err(|e| BenchError::Spec(e.to_string()))?;
        Ok(config)
    }

    fn raw(&self) -> RawSpec {
        RawSpec {
            dimensions: self.dimensions,
            walks_per_node: self.walks_per_node,
            walk_length: self.walk_length,
            window: self.window,
            negatives: self.negatives,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            p: self.p,
            q: self.q,
            similarity: self.similarity.clone(),
            knn: self.knn,
            ..RawSpec::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file (`n <count> [bipartite]` header, then `i j w` lines).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_objective)]
    objective: ObjectiveKind,
    #[arg(long, value_enum, default_value = "exact")]
    heuristic: Heuristic,
    #[arg(long, value_parser = parse_matcher, default_value = "exact")]
    surrogate_matcher: SurrogateMatcher,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_method, default_value = "deepwalk")]
    method: WalkMethod,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML spec file with flat keys mirroring these flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bipartite: bool,
    #[arg(long)]
    objective: Option<String>,
    /// Comma-separated: exact, greedy, deepwalk, node2vec.
    #[arg(long)]
    algorithms: Option<String>,
    /// `var=v1,v2,...` over t, n, alpha, walks_per_node, walk_length, dimensions.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    surrogate_matcher: Option<String>,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Trials CSV written by `bench`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "report")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "svg")]
    format: Format,
}

fn parse_generator(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e: BenchError| e.to_string())
}

fn parse_objective(s: &str) -> Result<ObjectiveKind, String> {
    s.parse().map_err(|e: matchembed::Error| e.to_string())
}

fn parse_matcher(s: &str) -> Result<SurrogateMatcher, String> {
    s.parse().map_err(|e: matchembed::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<WalkMethod, String> {
    s.parse().map_err(|e: matchembed::Error| e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), BenchError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| BenchError::Io(path.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| BenchError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn read_graph(path: &Path) -> Result<matchembed::DenseGraph, BenchError> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::Io(path.to_path_buf(), e))?;
    Ok(parse_graph(&text)?)
}

fn gen(args: GenArgs) -> Result<(), BenchError> {
    let cell = Cell {
        index: 0,
        value: 0.0,
        generator: args.generator,
        t: args.t,
        epsilon: args.epsilon,
        alpha: args.alpha,
        n: args.n,
        bipartite: args.bipartite,
        embedding: EmbeddingConfig::default(),
    };
    let graph = cell.instance(args.seed).map_err(|e| BenchError::Spec(e.to_string()))?;
    emit(args.out.as_deref(), &format!("# {}\n{}", cell.descriptor(), write_graph(&graph)))
}

fn solve(args: SolveArgs) -> Result<(), BenchError> {
    let graph = read_graph(&args.input)?;
    let (report, extra) = match args.heuristic {
        Heuristic::Exact => (solve_exact(&graph, args.objective)?, String::new()),
        Heuristic::Greedy => (greedy_match(&graph, args.objective, TiePolicy::ByIndex)?, String::new()),
        Heuristic::Deepwalk | Heuristic::Node2vec => {
            let method = match args.heuristic {
                Heuristic::Deepwalk => WalkMethod::DeepWalk,
                _ => WalkMethod::Node2Vec,
            };
            let config = args.embedding.config(method)?;
            let r = approx_match(&graph, args.objective, &config, args.surrogate_matcher, args.seed)?;
            let extra = format!(
                "# surrogate_value {:?}\n# embed_ms {:.3}\n",
                r.surrogate_value,
                r.embed_time.as_secs_f64() * 1e3
            );
            (r.report, extra)
        }
    };
    let text = format!(
        "# objective {}\n# value {:?}\n# uses_sentinel {}\n# solve_ms {:.3}\n{extra}{}",
        args.objective,
        report.value,
        report.uses_sentinel,
        report.wall_time.as_secs_f64() * 1e3,
        write_matching(&report.matching)
    );
    emit(args.out.as_deref(), &text)
}

fn embed(args: EmbedArgs) -> Result<(), BenchError> {
    let graph = read_graph(&args.input)?;
    let config = args.embedding.config(args.method)?;
    let embedding = embed_graph(&graph, &config, args.seed)?;
    log::info!("final loss {}", embedding.final_loss());
    emit(args.out.as_deref(), &write_embedding(&embedding.vectors))
}

fn bench(args: BenchArgs) -> Result<(), BenchError> {
    let file = match &args.spec {
        Some(path) => RawSpec::from_file(path)?,
        None => RawSpec::default(),
    };
    let flags = RawSpec {
        id: args.id.clone(),
        generator: args.generator.clone(),
        t: args.t,
        alpha: args.alpha,
        n: args.n,
        bipartite: args.bipartite.then_some(true),
        objective: args.objective.clone(),
        algorithms: args.algorithms.clone().map(NameList::One),
        sweep: args.sweep.clone(),
        trials: args.trials,
        seed: args.seed,
        surrogate_matcher: args.surrogate_matcher.clone(),
        out: args.out.clone(),
        threads: args.threads,
        ..args.embedding.raw()
    };
    let raw = file.merge(flags);
    let spec = raw.resolve()?;
    let out = raw.out.clone().unwrap_or_else(|| PathBuf::from("results").join(&spec.id));
    let result = run_experiment(&spec, raw.threads.unwrap_or(0))?;
    let summary = write_outputs(&out, &result.records, Some(&result.timings), args.format == Format::Svg)?;
    for row in &summary {
        println!(
            "{} {}={} {}: mean {} {:.4} ± {:.4} (n={})",
            row.objective, row.sweep_var, row.sweep_value, row.algorithm, row.metric, row.mean, row.half_width, row.trials
        );
    }
    if !result.failed_cells.is_empty() {
        return Err(BenchError::Stats(format!("{} cell(s) failed entirely", result.failed_cells.len())));
    }
    eprintln!("results written to {}", out.display());
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), BenchError> {
    let file = fs::File::open(&args.input).map_err(|e| BenchError::Io(args.input.clone(), e))?;
    let records = read_trials_csv(file)?;
    write_outputs(&args.out, &records, None, args.format == Format::Svg)?;
    eprintln!("report written to {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Embed(a) => embed(a),
        Command::Bench(a) => bench(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
