use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hybridcolor::driver::DEFAULT_THRESHOLD;
use hybridcolor::exec::DEFAULT_CHUNK_SIZE;
use hybridcolor::graph::write_csr_binary;
use hybridcolor::microbench::{DEFAULT_BATCH, DEFAULT_REPETITIONS};
use hybridcolor::{
    color_graph_with, degree_stats, detect_crossovers, load_graph, run_push_bench, verify_coloring, write_tti_csv,
    BenchConfig, CsrGraph, Executor, HybridConfig, Mode, Variant,
};

#[derive(Parser)]
#[command(
    name = "hybridcolor",
    version,
    about = "Hybrid data/topology-driven parallel graph coloring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print node, edge and degree statistics.
    Stats(StatsArgs),
    /// Color a graph and report colors used, rounds and timing.
    Color(ColorArgs),
    /// Run the worklist-versus-sweep push micro-benchmark.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Data,
    Topo,
    Hybrid,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Data => Mode::Data,
            ModeArg::Topo => Mode::Topo,
            ModeArg::Hybrid => Mode::Hybrid,
        }
    }
}

#[derive(Args)]
struct Parallelism {
    /// Worker threads.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    /// Nodes per scheduling chunk.
    #[arg(long, default_value_t = DEFAULT_CHUNK_SIZE as u32, value_parser = clap::value_parser!(u32).range(1..))]
    chunk: u32,
}

impl Parallelism {
    fn executor(&self) -> Result<Executor, CliError> {
        Executor::new(self.workers as usize, self.chunk as usize).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Args)]
struct StatsArgs {
    /// Matrix Market file or binary CSR cache.
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also write the preprocessed graph as a binary CSR cache.
    #[arg(long, value_name = "PATH")]
    save_cache: Option<PathBuf>,
}

#[derive(Args)]
struct ColorArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Hybrid)]
    mode: ModeArg,
    /// Worklist fraction of the node count above which the sweep kernel runs.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD, allow_negative_numbers = true)]
    threshold: f64,
    #[command(flatten)]
    par: Parallelism,
    /// Report format; defaults to a table on the terminal and JSON with --out.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    graph: PathBuf,
    /// Nodes deactivated per iteration.
    #[arg(long, default_value_t = DEFAULT_BATCH as u64, value_parser = clap::value_parser!(u64).range(1..))]
    batch: u64,
    /// Repetitions averaged per iteration.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[command(flatten)]
    par: Parallelism,
    /// CSV destination; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum CliError {
    InvalidColoring(String),
    Usage(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidColoring(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::InvalidColoring(m) | CliError::Usage(m) | CliError::Io(m) => m,
        }
    }
}

fn io_error(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

fn load(path: &Path) -> Result<CsrGraph, CliError> {
    load_graph(path).map_err(|e| CliError::Usage(e.to_string()))
}

fn graph_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error(path, e))
}

fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let graph = load(&args.graph)?;
    let stats = degree_stats(&graph).map_err(|e| CliError::Usage(format!("{}: {e}", args.graph.display())))?;
    if let Some(path) = &args.save_cache {
        let mut out = create(path)?;
        write_csr_binary(&graph, &mut out).map_err(|e| io_error(path, e))?;
    }
    let name = graph_label(&args.graph);
    match args.format {
        Format::Json => {
            let doc = serde_json::json!({ "graph": name, "stats": stats });
            println!("{}", serde_json::to_string_pretty(&doc).expect("stats serialize"));
        }
        Format::Csv => {
            println!("graph,nodes,edges,degree_min,degree_median,degree_max");
            println!(
                "{name},{},{},{},{},{}",
                stats.num_nodes, stats.num_undirected_edges, stats.min_degree, stats.median_degree, stats.max_degree
            );
        }
        Format::Table => {
            println!(
                "{} nodes, {} edges, δ {}/{}/{}",
                stats.num_nodes, stats.num_undirected_edges, stats.min_degree, stats.median_degree, stats.max_degree
            );
            println!(
                "{:<24} {:>12} {:>14} {:>6} {:>8} {:>10}",
                "Graph", "Nodes", "Edges", "δmin", "δmedian", "δmax"
            );
            println!(
                "{:<24} {:>12} {:>14} {:>6} {:>8} {:>10}",
                name,
                stats.num_nodes,
                stats.num_undirected_edges,
                stats.min_degree,
                stats.median_degree,
                stats.max_degree
            );
        }
    }
    Ok(())
}

fn cmd_color(args: &ColorArgs) -> Result<(), CliError> {
    let config = HybridConfig {
        threshold_fraction: args.threshold,
        mode: args.mode.into(),
        workers: args.par.workers as usize,
        chunk_size: args.par.chunk as usize,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let graph = load(&args.graph)?;
    let exec = args.par.executor()?;
    let (colors, report) = color_graph_with(&exec, &graph, &config);
    let conflicts = verify_coloring(&graph, &colors).expect("coloring covers every node");

    let name = graph_label(&args.graph);
    let format = args.format.unwrap_or(if args.out.is_some() {
        Format::Json
    } else {
        Format::Table
    });
    let rendered = match format {
        Format::Json => report.to_json(&name).into_bytes(),
        Format::Table => report.to_table(&name).into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).expect("in-memory csv");
            buf
        }
    };
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            out.write_all(&rendered)
                .and_then(|_| out.flush())
                .map_err(|e| io_error(path, e))?;
            println!(
                "colors_used={} total_rounds={} total_time_ms={:.3} valid={}",
                report.colors_used,
                report.total_rounds,
                report.total_time.as_secs_f64() * 1e3,
                report.valid
            );
        }
        None => io::stdout()
            .write_all(&rendered)
            .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
    }

    if conflicts != 0 {
        return Err(CliError::InvalidColoring(format!(
            "coloring of {} has {conflicts} conflicting edges",
            args.graph.display()
        )));
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let graph = load(&args.graph)?;
    let exec = args.par.executor()?;
    // open the destination first so an unwritable path fails before the run
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };

    let run = |variant| {
        let cfg = BenchConfig {
            batch_size: args.batch as usize,
            variant,
            repetitions: args.reps as usize,
            record_sets: false,
        };
        run_push_bench(&exec, &graph, &cfg).map_err(|e| CliError::Usage(e.to_string()))
    };
    let wl = run(Variant::PushWl)?;
    let nowl = run(Variant::PushNowl)?;

    let out_name = args
        .out
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "stdout".into());
    write_tti_csv(&mut sink, &[&wl, &nowl]).map_err(|e| CliError::Io(format!("{out_name}: {e}")))?;
    sink.flush().map_err(|e| CliError::Io(format!("{out_name}: {e}")))?;
    drop(sink);

    let crossovers = detect_crossovers(&wl, &nowl).expect("variants share an iteration range");
    let same_work = wl.same_work_as(&nowl);
    // keep stdout pure CSV when it carries the series
    let mut summary: Box<dyn Write> = if args.out.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    let crossover_text = if crossovers.is_empty() {
        "none".to_string()
    } else {
        crossovers.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    };
    let _ = writeln!(summary, "iterations={} per variant", wl.per_iteration.len());
    let _ = writeln!(
        summary,
        "equal_work={}",
        if same_work { "verified" } else { "MISMATCH" }
    );
    let _ = writeln!(summary, "crossovers={crossover_text}");
    if !same_work {
        return Err(CliError::InvalidColoring(
            "push_wl and push_nowl deactivated different node sets".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Stats(a) => cmd_stats(a),
        Command::Color(a) => cmd_color(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hybridcolor: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
