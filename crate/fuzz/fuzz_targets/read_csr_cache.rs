#![no_main]

use hybridcolor::graph::{read_csr_binary, write_csr_binary};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(graph) = read_csr_binary(data) {
        graph.validate().expect("decoder accepted an invalid CSR");
        let mut again = Vec::new();
        write_csr_binary(&graph, &mut again).unwrap();
        assert_eq!(again, data, "accepted cache did not re-encode identically");
    }
});
