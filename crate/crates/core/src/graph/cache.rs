//! Versioned little-endian binary dump of a preprocessed [`CsrGraph`].
//!
//! Layout:
//!
//! | offset | size          | field                         |
//! |--------|---------------|-------------------------------|
//! | 0      | 8             | magic `HYCSR\0\0\x01`         |
//! | 8      | 4             | format version (u32)          |
//! | 12     | 8             | node count `n` (u64)          |
//! | 20     | 8             | half-edge count `m` (u64)     |
//! | 28     | 8 * (n + 1)   | row offsets (u64 each)        |
//! | ...    | 4 * m         | column indices (u32 each)     |
//!
//! The reader treats its input as untrusted and re-checks every CSR invariant.

use std::io::{self, Write};

use thiserror::Error;

use super::{CsrGraph, GraphError, NodeId};

pub const CACHE_MAGIC: [u8; 8] = *b"HYCSR\0\0\x01";
pub const CACHE_VERSION: u32 = 1;
const HEADER_LEN: usize = 28;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("not a CSR cache (bad magic)")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    Version(u32),
    #[error("cache truncated or has trailing bytes: expected {expected} bytes, found {found}")]
    Length { expected: u128, found: usize },
    #[error("node count {0} exceeds the supported id range")]
    TooManyNodes(u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn write_csr_binary<W: Write>(graph: &CsrGraph, mut out: W) -> io::Result<()> {
    out.write_all(&CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&(graph.num_nodes() as u64).to_le_bytes())?;
    out.write_all(&(graph.num_edges() as u64).to_le_bytes())?;
    for &off in graph.row_offsets() {
        out.write_all(&(off as u64).to_le_bytes())?;
    }
    for &v in graph.col_indices() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap())
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap())
}

pub fn read_csr_binary(bytes: &[u8]) -> Result<CsrGraph, CacheError> {
    if bytes.len() < CACHE_MAGIC.len() || bytes[..CACHE_MAGIC.len()] != CACHE_MAGIC {
        return Err(CacheError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(CacheError::Length {
            expected: HEADER_LEN as u128,
            found: bytes.len(),
        });
    }
    let version = u32_at(bytes, 8);
    if version != CACHE_VERSION {
        return Err(CacheError::Version(version));
    }
    let n = u64_at(bytes, 12);
    let m = u64_at(bytes, 20);
    if n > u64::from(NodeId::MAX) {
        return Err(CacheError::TooManyNodes(n));
    }
    let expected = HEADER_LEN as u128 + 8 * (u128::from(n) + 1) + 4 * u128::from(m);
    if expected != bytes.len() as u128 {
        return Err(CacheError::Length {
            expected,
            found: bytes.len(),
        });
    }

    let (n, m) = (n as usize, m as usize);
    let offsets_end = HEADER_LEN + 8 * (n + 1);
    let row_offsets = bytes[HEADER_LEN..offsets_end]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .map(|off| usize::try_from(off).unwrap_or(usize::MAX))
        .collect();
    let col_indices = bytes[offsets_end..offsets_end + 4 * m]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(CsrGraph::from_parts(row_offsets, col_indices)?)
}
