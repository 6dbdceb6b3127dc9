#![no_main]

use hybridcolor::graph::{build_csr, parse_matrix_market};
use hybridcolor::{color_graph, verify_coloring, HybridConfig, Mode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&selector, text)) = data.split_first() else {
        return;
    };
    let Ok(edges) = parse_matrix_market(text) else {
        return;
    };
    if edges.num_nodes_declared > 4096 {
        return;
    }
    let graph = build_csr(&edges);
    let mode = [Mode::Data, Mode::Topo, Mode::Hybrid][usize::from(selector % 3)];
    let threshold = f64::from(selector >> 2) / 63.0;
    let config = HybridConfig::new(mode, threshold);
    let (colors, report) = color_graph(&graph, &config).unwrap();
    assert_eq!(verify_coloring(&graph, &colors), Ok(0));
    assert!(report.valid);
    assert!(report.colors_used as usize <= graph.max_degree() + 1);
});
