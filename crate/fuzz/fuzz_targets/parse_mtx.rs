#![no_main]

use hybridcolor::graph::{build_csr, parse_matrix_market};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Any accepted file must build into a valid CSR graph.
    if let Ok(edges) = parse_matrix_market(data) {
        if edges.num_nodes_declared <= 1 << 16 {
            let graph = build_csr(&edges);
            graph.validate().expect("parsed input produced an invalid CSR");
        }
    }
});
