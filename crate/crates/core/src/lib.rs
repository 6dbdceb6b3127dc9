//! Iterative parallel graph coloring with data-driven, topology-driven and
//! hybrid kernel scheduling, plus a worklist-versus-sweep micro-benchmark.
//!
//! ```
//! use hybridcolor::{color_graph, generate, verify_coloring, HybridConfig};
//!
//! let graph = generate::grid(8, 8);
//! let (colors, report) = color_graph(&graph, &HybridConfig::default()).unwrap();
//! assert_eq!(verify_coloring(&graph, &colors), Ok(0));
//! assert!(report.colors_used <= graph.max_degree() as u32 + 1);
//! ```

pub mod driver;
pub mod exec;
pub mod generate;
pub mod graph;
pub mod ipgc;
pub mod microbench;
pub mod worklist;

pub use driver::{
    color_graph, color_graph_with, colors_used, verify_coloring, ColoringError, ConfigError, HybridConfig, Kernel,
    Mode, RoundRecord, RunReport,
};
pub use exec::Executor;
pub use graph::{build_csr, degree_stats, load_graph, parse_matrix_market, CsrGraph, DegreeStats, EdgeList, NodeId};
pub use ipgc::{Color, ColorState, RoundOutcome};
pub use microbench::{detect_crossovers, run_push_bench, write_tti_csv, BenchConfig, TtiSeries, Variant};
pub use worklist::Worklist;
