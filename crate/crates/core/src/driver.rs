//! Hybrid driver: picks the topology-driven or data-driven kernel each round
//! from the current worklist size, keeping the worklist in both modes.

use std::fmt::{self, Write as _};
use std::io;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{Executor, DEFAULT_CHUNK_SIZE};
use crate::graph::CsrGraph;
use crate::ipgc::{data_driven_iteration, topology_driven_iteration, Color, ColorState, UNCOLORED};
use crate::worklist::Worklist;

pub const DEFAULT_THRESHOLD: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Data,
    Topo,
    Hybrid,
}

/// Kernel actually run in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Data,
    Topo,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Data => "data",
            Mode::Topo => "topo",
            Mode::Hybrid => "hybrid",
        }
    }
}

impl Kernel {
    pub fn as_str(self) -> &'static str {
        match self {
            Kernel::Data => "data",
            Kernel::Topo => "topo",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "data" => Ok(Mode::Data),
            "topo" => Ok(Mode::Topo),
            "hybrid" => Ok(Mode::Hybrid),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("threshold {0} is outside [0, 1]")]
    Threshold(f64),
    #[error("unknown mode `{0}` (expected data, topo or hybrid)")]
    UnknownMode(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HybridConfig {
    /// Worklist size, as a fraction of the node count, above which the
    /// topology-driven kernel runs.
    pub threshold_fraction: f64,
    pub mode: Mode,
    pub workers: usize,
    pub chunk_size: usize,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            threshold_fraction: DEFAULT_THRESHOLD,
            mode: Mode::Hybrid,
            workers: 1,
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }
}

impl HybridConfig {
    pub fn new(mode: Mode, threshold_fraction: f64) -> Self {
        Self {
            mode,
            threshold_fraction,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.threshold_fraction) {
            return Err(ConfigError::Threshold(self.threshold_fraction));
        }
        Ok(())
    }

    /// `ceil(threshold_fraction * num_nodes)`, tolerant of float noise such as
    /// `0.6 * 5 = 3.0000000000000004`.
    pub fn threshold_nodes(&self, num_nodes: usize) -> usize {
        let exact = self.threshold_fraction * num_nodes as f64;
        let nearest = exact.round();
        if (exact - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            exact.ceil() as usize
        }
    }

    /// Kernel for a round that starts with `worklist_len` active nodes.
    pub fn kernel_for(&self, worklist_len: usize, num_nodes: usize) -> Kernel {
        match self.mode {
            Mode::Data => Kernel::Data,
            Mode::Topo => Kernel::Topo,
            Mode::Hybrid if worklist_len > self.threshold_nodes(num_nodes) => Kernel::Topo,
            Mode::Hybrid => Kernel::Data,
        }
    }

    pub fn executor(&self) -> Result<Executor, ConfigError> {
        Executor::new(self.workers, self.chunk_size).map_err(|e| ConfigError::Pool(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub mode_used: Kernel,
    pub worklist_size_in: usize,
    pub worklist_size_out: usize,
    pub conflicts: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: HybridConfig,
    pub num_nodes: usize,
    pub num_undirected_edges: usize,
    pub per_round: Vec<RoundRecord>,
    pub total_rounds: usize,
    pub total_time: Duration,
    pub colors_used: Color,
    pub valid: bool,
}

/// Colors `graph` using a fresh worker pool built from `config`.
pub fn color_graph(graph: &CsrGraph, config: &HybridConfig) -> Result<(Vec<Color>, RunReport), ConfigError> {
    config.validate()?;
    let exec = config.executor()?;
    Ok(color_graph_with(&exec, graph, config))
}

/// Colors `graph` on an existing pool. `config.workers` and `config.chunk_size`
/// are ignored in favor of the pool's own settings.
///
/// # Panics
///
/// Panics if `config` fails [`HybridConfig::validate`].
pub fn color_graph_with(exec: &Executor, graph: &CsrGraph, config: &HybridConfig) -> (Vec<Color>, RunReport) {
    config.validate().expect("invalid hybrid config");
    let n = graph.num_nodes();
    let state = ColorState::new(n);
    let mut wl = Worklist::init_full(n);
    let mut per_round = Vec::new();
    let start = Instant::now();

    let mut round = 0u32;
    while !wl.is_empty() {
        round += 1;
        let size_in = wl.len();
        let kernel = config.kernel_for(size_in, n);
        let t0 = Instant::now();
        let outcome = match kernel {
            Kernel::Topo => topology_driven_iteration(exec, graph, &state, &mut wl, round),
            Kernel::Data => data_driven_iteration(exec, graph, &state, &mut wl, round),
        };
        per_round.push(RoundRecord {
            round,
            mode_used: kernel,
            worklist_size_in: size_in,
            worklist_size_out: wl.len(),
            conflicts: outcome.conflicts_detected,
            wall_time: t0.elapsed(),
        });
    }
    let total_time = start.elapsed();

    let colors = state.colors();
    let valid = verify_coloring(graph, &colors) == Ok(0);
    let report = RunReport {
        config: HybridConfig {
            workers: exec.workers(),
            chunk_size: exec.chunk_size(),
            ..*config
        },
        num_nodes: n,
        num_undirected_edges: graph.num_undirected_edges(),
        total_rounds: per_round.len(),
        per_round,
        total_time,
        colors_used: colors.iter().copied().max().unwrap_or(0),
        valid,
    };
    (colors, report)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("node {0} is uncolored")]
    Uncolored(usize),
    #[error("coloring has {found} entries but the graph has {expected} nodes")]
    LengthMismatch { expected: usize, found: usize },
}

/// Largest color in a complete coloring.
pub fn colors_used(colors: &[Color]) -> Result<Color, ColoringError> {
    if let Some(u) = colors.iter().position(|&c| c == UNCOLORED) {
        return Err(ColoringError::Uncolored(u));
    }
    Ok(colors.iter().copied().max().unwrap_or(0))
}

/// Number of edges whose endpoints share a color or whose lower endpoint is uncolored.
pub fn verify_coloring(graph: &CsrGraph, colors: &[Color]) -> Result<usize, ColoringError> {
    if colors.len() != graph.num_nodes() {
        return Err(ColoringError::LengthMismatch {
            expected: graph.num_nodes(),
            found: colors.len(),
        });
    }
    Ok(graph
        .undirected_edges()
        .filter(|&(u, v)| {
            let (cu, cv) = (colors[u as usize], colors[v as usize]);
            cu == cv || cu == UNCOLORED
        })
        .count())
}

// Serialized forms. Everything that depends on the clock lives under `timing`
// (JSON) or in the trailing `micros` column (CSV) so determinism checks can
// drop it mechanically.

#[derive(Serialize)]
struct RoundDoc {
    round: u32,
    mode: Kernel,
    wl_in: usize,
    wl_out: usize,
    conflicts: usize,
}

#[derive(Serialize)]
struct TimingDoc {
    total_micros: u128,
    round_micros: Vec<u128>,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    graph: &'a str,
    mode: Mode,
    threshold: f64,
    workers: usize,
    chunk_size: usize,
    num_nodes: usize,
    num_edges: usize,
    total_rounds: usize,
    colors_used: Color,
    valid: bool,
    rounds: Vec<RoundDoc>,
    timing: TimingDoc,
}

#[derive(Serialize)]
struct CsvRow {
    round: u32,
    mode: &'static str,
    wl_in: usize,
    wl_out: usize,
    conflicts: usize,
    micros: u128,
}

impl RunReport {
    /// Pretty JSON document; `graph` names the input for downstream tools.
    pub fn to_json(&self, graph: &str) -> String {
        let doc = ReportDoc {
            graph,
            mode: self.config.mode,
            threshold: self.config.threshold_fraction,
            workers: self.config.workers,
            chunk_size: self.config.chunk_size,
            num_nodes: self.num_nodes,
            num_edges: self.num_undirected_edges,
            total_rounds: self.total_rounds,
            colors_used: self.colors_used,
            valid: self.valid,
            rounds: self
                .per_round
                .iter()
                .map(|r| RoundDoc {
                    round: r.round,
                    mode: r.mode_used,
                    wl_in: r.worklist_size_in,
                    wl_out: r.worklist_size_out,
                    conflicts: r.conflicts,
                })
                .collect(),
            timing: TimingDoc {
                total_micros: self.total_time.as_micros(),
                round_micros: self.per_round.iter().map(|r| r.wall_time.as_micros()).collect(),
            },
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    /// Per-round telemetry with header `round,mode,wl_in,wl_out,conflicts,micros`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(["round", "mode", "wl_in", "wl_out", "conflicts", "micros"])?;
        for r in &self.per_round {
            w.serialize(CsvRow {
                round: r.round,
                mode: r.mode_used.as_str(),
                wl_in: r.worklist_size_in,
                wl_out: r.worklist_size_out,
                conflicts: r.conflicts,
                micros: r.wall_time.as_micros(),
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned human-readable table followed by a summary block.
    pub fn to_table(&self, graph: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "graph {graph}: {} nodes, {} edges, mode {}, threshold {}, workers {}",
            self.num_nodes,
            self.num_undirected_edges,
            self.config.mode,
            self.config.threshold_fraction,
            self.config.workers
        );
        let _ = writeln!(
            s,
            "{:>6}  {:<5}  {:>10}  {:>10}  {:>10}  {:>12}",
            "round", "mode", "wl_in", "wl_out", "conflicts", "micros"
        );
        for r in &self.per_round {
            let _ = writeln!(
                s,
                "{:>6}  {:<5}  {:>10}  {:>10}  {:>10}  {:>12}",
                r.round,
                r.mode_used.as_str(),
                r.worklist_size_in,
                r.worklist_size_out,
                r.conflicts,
                r.wall_time.as_micros()
            );
        }
        let _ = writeln!(s, "colors_used  {}", self.colors_used);
        let _ = writeln!(s, "total_rounds {}", self.total_rounds);
        let _ = writeln!(s, "total_time   {:.3} ms", self.total_time.as_secs_f64() * 1e3);
        let _ = writeln!(s, "valid        {}", self.valid);
        s
    }
}
