//! Deterministic synthetic graph families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{CsrGraph, NodeId};

/// G(n, p): every pair joined independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> CsrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    CsrGraph::from_edges(n, &edges)
}

/// `m` uniformly random endpoint pairs; self-loops and repeats collapse in CSR build.
pub fn random_edges(n: usize, m: usize, seed: u64) -> CsrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(NodeId, NodeId)> = if n == 0 {
        Vec::new()
    } else {
        (0..m)
            .map(|_| (rng.gen_range(0..n as NodeId), rng.gen_range(0..n as NodeId)))
            .collect()
    };
    CsrGraph::from_edges(n, &edges)
}

pub fn grid(rows: usize, cols: usize) -> CsrGraph {
    let id = |r: usize, c: usize| (r * cols + c) as NodeId;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    CsrGraph::from_edges(rows * cols, &edges)
}

/// Node 0 joined to nodes `1..n`.
pub fn star(n: usize) -> CsrGraph {
    let edges: Vec<_> = (1..n as NodeId).map(|v| (0, v)).collect();
    CsrGraph::from_edges(n, &edges)
}

pub fn clique(n: usize) -> CsrGraph {
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            edges.push((u, v));
        }
    }
    CsrGraph::from_edges(n, &edges)
}

pub fn path(n: usize) -> CsrGraph {
    let edges: Vec<_> = (1..n as NodeId).map(|v| (v - 1, v)).collect();
    CsrGraph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> CsrGraph {
    let mut edges: Vec<_> = (1..n as NodeId).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n as NodeId - 1, 0));
    }
    CsrGraph::from_edges(n, &edges)
}

/// Random relabeling of `graph`, useful to break id-order structure.
pub fn shuffled(graph: &CsrGraph, seed: u64) -> CsrGraph {
    use rand::seq::SliceRandom;
    let mut perm: Vec<NodeId> = (0..graph.num_nodes() as NodeId).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let edges: Vec<_> = graph
        .undirected_edges()
        .map(|(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    CsrGraph::from_edges(graph.num_nodes(), &edges)
}
