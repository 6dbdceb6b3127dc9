//! Undirected graphs in compressed-sparse-row form.

mod cache;
mod mtx;

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use cache::{read_csr_binary, write_csr_binary, CacheError, CACHE_MAGIC, CACHE_VERSION};
pub use mtx::{parse_matrix_market, MtxError};

/// Dense zero-based node identifier.
pub type NodeId = u32;

/// Raw coordinate pairs as read from disk, before any cleanup.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub num_nodes_declared: usize,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// Immutable symmetric adjacency without self-loops or parallel edges.
///
/// Neighbor lists are sorted ascending. `num_edges` counts half-edges, so an
/// undirected edge contributes two entries to `col_indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    row_offsets: Vec<usize>,
    col_indices: Vec<NodeId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("invalid CSR structure: {0}")]
    InvalidCsr(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub num_nodes: usize,
    pub num_undirected_edges: usize,
    pub min_degree: usize,
    pub median_degree: usize,
    pub max_degree: usize,
}

/// Builds the symmetric closure of `edge_list`, dropping self-loops and duplicates.
///
/// # Panics
///
/// Panics if an edge references a node `>= num_nodes_declared`.
pub fn build_csr(edge_list: &EdgeList) -> CsrGraph {
    let n = edge_list.num_nodes_declared;
    let mut counts = vec![0usize; n + 1];
    for &(u, v) in &edge_list.edges {
        assert!(
            (u as usize) < n && (v as usize) < n,
            "edge ({u}, {v}) out of bounds for {n} nodes"
        );
        if u != v {
            counts[u as usize + 1] += 1;
            counts[v as usize + 1] += 1;
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }

    let mut cursor = counts.clone();
    let mut scratch = vec![0 as NodeId; counts[n]];
    for &(u, v) in &edge_list.edges {
        if u != v {
            scratch[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            scratch[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
    }

    // Sort and dedupe each range, then compact in place.
    let mut row_offsets = Vec::with_capacity(n + 1);
    row_offsets.push(0);
    let mut write = 0usize;
    for u in 0..n {
        let (start, end) = (counts[u], counts[u + 1]);
        scratch[start..end].sort_unstable();
        let mut last = None;
        for read in start..end {
            let v = scratch[read];
            if last != Some(v) {
                scratch[write] = v;
                write += 1;
                last = Some(v);
            }
        }
        row_offsets.push(write);
    }
    scratch.truncate(write);
    scratch.shrink_to_fit();

    CsrGraph {
        row_offsets,
        col_indices: scratch,
    }
}

impl CsrGraph {
    /// Assembles a graph from raw parts, checking every structural invariant.
    pub fn from_parts(row_offsets: Vec<usize>, col_indices: Vec<NodeId>) -> Result<Self, GraphError> {
        let graph = Self {
            row_offsets,
            col_indices,
        };
        graph.validate()?;
        Ok(graph)
    }

    /// Convenience constructor for tests and generators.
    pub fn from_edges(num_nodes: usize, edges: &[(NodeId, NodeId)]) -> Self {
        build_csr(&EdgeList {
            num_nodes_declared: num_nodes,
            edges: edges.to_vec(),
        })
    }

    /// Checks offsets, bounds, self-loops, ordering, duplicates and symmetry.
    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidCsr(msg));
        let offsets = &self.row_offsets;
        if offsets.is_empty() || offsets[0] != 0 {
            return bad("row_offsets must start at 0".into());
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return bad("row_offsets must be non-decreasing".into());
        }
        if *offsets.last().unwrap() != self.col_indices.len() {
            return bad("row_offsets must end at the half-edge count".into());
        }
        let n = self.num_nodes();
        for u in 0..n {
            let nbrs = self.neighbors(u as NodeId);
            for (i, &v) in nbrs.iter().enumerate() {
                if v as usize >= n {
                    return bad(format!("node {u} has out-of-range neighbor {v}"));
                }
                if v as usize == u {
                    return bad(format!("node {u} has a self-loop"));
                }
                if i > 0 && nbrs[i - 1] >= v {
                    return bad(format!("neighbors of {u} are not strictly ascending"));
                }
                if self.neighbors(v).binary_search(&(u as NodeId)).is_err() {
                    return bad(format!("edge {u}->{v} has no reverse"));
                }
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.row_offsets.len() - 1
    }

    /// Half-edge count (twice the undirected edge count).
    pub fn num_edges(&self) -> usize {
        self.col_indices.len()
    }

    pub fn num_undirected_edges(&self) -> usize {
        self.col_indices.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.col_indices[self.row_offsets[u]..self.row_offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.row_offsets[u + 1] - self.row_offsets[u]
    }

    pub fn max_degree(&self) -> usize {
        self.row_offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[NodeId] {
        &self.col_indices
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.num_nodes() as NodeId).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// All half-edges, suitable for feeding back into [`build_csr`].
    pub fn to_edge_list(&self) -> EdgeList {
        let edges = (0..self.num_nodes() as NodeId)
            .flat_map(|u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .collect();
        EdgeList {
            num_nodes_declared: self.num_nodes(),
            edges,
        }
    }
}

/// Min, lower median (sorted index `n / 2`) and max node degree.
pub fn degree_stats(graph: &CsrGraph) -> Result<DegreeStats, GraphError> {
    let n = graph.num_nodes();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut degrees: Vec<usize> = graph.row_offsets.windows(2).map(|w| w[1] - w[0]).collect();
    let (_, &mut median, _) = degrees.select_nth_unstable(n / 2);
    Ok(DegreeStats {
        num_nodes: n,
        num_undirected_edges: graph.num_undirected_edges(),
        min_degree: *degrees.iter().min().unwrap(),
        median_degree: median,
        max_degree: *degrees.iter().max().unwrap(),
    })
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Mtx { path: String, source: MtxError },
    #[error("{path}: {source}")]
    Cache { path: String, source: CacheError },
}

/// Loads either a binary CSR cache (detected by its magic) or a Matrix Market file.
pub fn load_graph(path: &Path) -> Result<CsrGraph, LoadError> {
    let shown = || path.display().to_string();
    let io_err = |source| LoadError::Io { path: shown(), source };
    let mut reader = BufReader::with_capacity(1 << 16, File::open(path).map_err(io_err)?);
    if reader.fill_buf().map_err(io_err)?.starts_with(&CACHE_MAGIC) {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes).map_err(io_err)?;
        return read_csr_binary(&bytes).map_err(|source| LoadError::Cache { path: shown(), source });
    }
    let edges = parse_matrix_market(reader).map_err(|source| LoadError::Mtx { path: shown(), source })?;
    Ok(build_csr(&edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn adjacency(g: &CsrGraph) -> Vec<Vec<NodeId>> {
        (0..g.num_nodes() as NodeId).map(|u| g.neighbors(u).to_vec()).collect()
    }

    #[test]
    fn dedupes_and_drops_self_loops() {
        let g = CsrGraph::from_edges(3, &[(0, 1), (1, 0), (1, 1), (1, 2), (1, 2)]);
        assert_eq!(adjacency(&g), vec![vec![1], vec![0, 2], vec![1]]);
        assert_eq!(g.num_edges(), 4);
        g.validate().unwrap();
    }

    #[test]
    fn isolated_nodes_only() {
        let g = CsrGraph::from_edges(4, &[]);
        assert_eq!(g.row_offsets(), &[0, 0, 0, 0, 0]);
        assert_eq!(g.num_nodes(), 4);
    }

    #[test]
    fn symmetric_closure() {
        let g = CsrGraph::from_edges(2, &[(0, 1)]);
        assert_eq!(adjacency(&g), vec![vec![1], vec![0]]);
    }

    #[test]
    fn path_and_triangle_stats() {
        let p3 = CsrGraph::from_edges(3, &[(0, 1), (1, 2)]);
        let s = degree_stats(&p3).unwrap();
        assert_eq!((s.min_degree, s.median_degree, s.max_degree), (1, 1, 2));
        assert_eq!((s.num_nodes, s.num_undirected_edges), (3, 2));

        let k3 = CsrGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let s = degree_stats(&k3).unwrap();
        assert_eq!((s.min_degree, s.median_degree, s.max_degree), (2, 2, 2));
    }

    #[test]
    fn median_is_sorted_index_half_n() {
        // star on 4 nodes: degrees [3,1,1,1], sorted [1,1,1,3], index 2 -> 1
        let star = CsrGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(degree_stats(&star).unwrap().median_degree, 1);
        // P4: degrees [1,2,2,1], sorted [1,1,2,2], index 2 -> 2
        let p4 = CsrGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(degree_stats(&p4).unwrap().median_degree, 2);
    }

    #[test]
    fn empty_graph_has_no_stats() {
        let g = CsrGraph::from_edges(0, &[]);
        assert_eq!(degree_stats(&g), Err(GraphError::Empty));
    }

    #[test]
    fn from_parts_rejects_broken_structure() {
        assert!(CsrGraph::from_parts(vec![0, 1, 1], vec![1]).is_err()); // no reverse
        assert!(CsrGraph::from_parts(vec![0, 1], vec![0]).is_err()); // self loop
        assert!(CsrGraph::from_parts(vec![0, 2, 1], vec![1, 0]).is_err()); // decreasing
        assert!(CsrGraph::from_parts(vec![1, 1], vec![]).is_err());
        assert!(CsrGraph::from_parts(vec![0, 1, 2], vec![1, 0]).is_ok());
    }

    fn arb_edge_list() -> impl Strategy<Value = EdgeList> {
        (1usize..40).prop_flat_map(|n| {
            prop::collection::vec((0..n as NodeId, 0..n as NodeId), 0..120).prop_map(move |edges| EdgeList {
                num_nodes_declared: n,
                edges,
            })
        })
    }

    proptest! {
        #[test]
        fn build_csr_invariants(el in arb_edge_list()) {
            let g = build_csr(&el);
            prop_assert!(g.validate().is_ok());
            let degree_sum: usize = (0..g.num_nodes() as NodeId).map(|u| g.degree(u)).sum();
            prop_assert_eq!(degree_sum, g.num_edges());
            prop_assert_eq!(g.num_edges(), 2 * g.num_undirected_edges());
            for &(u, v) in &el.edges {
                if u != v {
                    prop_assert!(g.neighbors(u).contains(&v));
                }
            }
        }

        #[test]
        fn rebuild_is_identity(el in arb_edge_list()) {
            let g = build_csr(&el);
            prop_assert_eq!(build_csr(&g.to_edge_list()), g);
        }
    }
}
