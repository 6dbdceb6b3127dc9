//! Replays the checked-in fuzz corpus and feeds arbitrary bytes to both
//! decoders on the stable toolchain.

use std::fs;
use std::path::{Path, PathBuf};

use hybridcolor::graph::{build_csr, parse_matrix_market, read_csr_binary, write_csr_binary};
use hybridcolor::{color_graph, verify_coloring, HybridConfig, Mode};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<(PathBuf, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {}", dir.display());
    files.into_iter().map(|p| (p.clone(), fs::read(p).unwrap())).collect()
}

fn check_mtx(data: &[u8]) -> bool {
    match parse_matrix_market(data) {
        Ok(edges) => {
            if edges.num_nodes_declared <= 1 << 16 {
                build_csr(&edges).validate().unwrap();
            }
            true
        }
        Err(_) => false,
    }
}

fn check_cache(data: &[u8]) -> bool {
    match read_csr_binary(data) {
        Ok(graph) => {
            graph.validate().unwrap();
            let mut again = Vec::new();
            write_csr_binary(&graph, &mut again).unwrap();
            assert_eq!(again, data);
            true
        }
        Err(_) => false,
    }
}

#[test]
fn parse_mtx_seeds() {
    let accepted: Vec<String> = corpus("parse_mtx")
        .into_iter()
        .filter(|(_, data)| check_mtx(data))
        .map(|(p, _)| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        accepted,
        [
            "header_only.mtx",
            "k3.mtx",
            "p3.mtx",
            "real_general.mtx",
            "rect_mixed_case.mtx"
        ]
    );
}

#[test]
fn read_csr_cache_seeds() {
    for (path, data) in corpus("read_csr_cache") {
        let ok = check_cache(&data);
        assert_eq!(ok, !path.ends_with("truncated.csr"), "{}", path.display());
    }
}

#[test]
fn mtx_to_coloring_seeds() {
    for (path, data) in corpus("mtx_to_coloring") {
        let (&selector, text) = data.split_first().unwrap();
        let graph = build_csr(&parse_matrix_market(text).unwrap());
        let mode = [Mode::Data, Mode::Topo, Mode::Hybrid][usize::from(selector % 3)];
        let config = HybridConfig::new(mode, f64::from(selector >> 2) / 63.0);
        let (colors, _) = color_graph(&graph, &config).unwrap();
        assert_eq!(verify_coloring(&graph, &colors), Ok(0), "{}", path.display());
    }
}

proptest! {
    #[test]
    fn mtx_never_panics(body in prop::collection::vec(any::<u8>(), 0..200)) {
        let mut data = b"%%MatrixMarket matrix coordinate pattern general\n".to_vec();
        data.extend_from_slice(&body);
        check_mtx(&data);
        check_mtx(&body);
    }

    #[test]
    fn mtx_entry_lines_never_panic(lines in prop::collection::vec("[0-9 .%x-]{0,12}", 0..12)) {
        let text = format!("%%MatrixMarket matrix coordinate real general\n{}", lines.join("\n"));
        check_mtx(text.as_bytes());
    }

    #[test]
    fn cache_never_panics(tail in prop::collection::vec(any::<u8>(), 0..120)) {
        let mut data = b"HYCSR\0\0\x01".to_vec();
        data.extend_from_slice(&tail);
        check_cache(&data);
        check_cache(&tail);
    }
}
