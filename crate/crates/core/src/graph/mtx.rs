//! Matrix Market coordinate reader.
//!
//! Only the `coordinate` layout is accepted. Values after the two indices are
//! ignored, so `pattern`, `integer`, `real` and `complex` files all load. The
//! symmetry qualifier is not interpreted here: every listed entry becomes one
//! edge and [`super::build_csr`] takes the symmetric closure.

use std::io::BufRead;

use thiserror::Error;

use super::{EdgeList, NodeId};

#[derive(Debug, Error)]
pub enum MtxError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: coordinate ({row}, {col}) outside declared {rows}x{cols} matrix")]
    Bounds {
        line: usize,
        row: u64,
        col: u64,
        rows: u64,
        cols: u64,
    },
    #[error("line {line}: cannot parse {what} from {token:?}")]
    Parse {
        line: usize,
        what: &'static str,
        token: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_err(line: usize, msg: impl Into<String>) -> MtxError {
    MtxError::Format { line, msg: msg.into() }
}

fn parse_index(line: usize, what: &'static str, token: Option<&str>) -> Result<u64, MtxError> {
    let token = token.ok_or_else(|| format_err(line, format!("missing {what}")))?;
    token.parse::<u64>().map_err(|_| MtxError::Parse {
        line,
        what,
        token: token.to_string(),
    })
}

fn check_banner(line_no: usize, banner: &str) -> Result<(), MtxError> {
    let mut words = banner.split_whitespace();
    let tag = words.next().unwrap_or_default();
    if !tag.eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(format_err(line_no, "missing %%MatrixMarket banner"));
    }
    match words.next() {
        Some(obj) if obj.eq_ignore_ascii_case("matrix") => {}
        _ => return Err(format_err(line_no, "banner object must be `matrix`")),
    }
    match words.next() {
        Some(layout) if layout.eq_ignore_ascii_case("coordinate") => {}
        Some(other) => {
            return Err(format_err(
                line_no,
                format!("unsupported layout `{other}`, expected `coordinate`"),
            ))
        }
        None => return Err(format_err(line_no, "banner is missing the layout")),
    }
    Ok(())
}

/// Reads a Matrix Market coordinate file into a zero-based edge list.
///
/// The node count is the larger of the declared row and column counts.
pub fn parse_matrix_market<R: BufRead>(mut reader: R) -> Result<EdgeList, MtxError> {
    let mut buf = String::new();
    let mut line_no = 0usize;

    if reader.read_line(&mut buf)? == 0 {
        return Err(format_err(1, "empty input"));
    }
    line_no += 1;
    check_banner(line_no, &buf)?;

    let mut dims: Option<(u64, u64)> = None;
    let mut edges = Vec::new();

    loop {
        buf.clear();
        if reader.read_line(&mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = buf.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut fields = line.split_whitespace();
        match dims {
            None => {
                let rows = parse_index(line_no, "row count", fields.next())?;
                let cols = parse_index(line_no, "column count", fields.next())?;
                let nnz = parse_index(line_no, "entry count", fields.next())?;
                if fields.next().is_some() {
                    return Err(format_err(line_no, "size line has trailing fields"));
                }
                if rows.max(cols) > u64::from(NodeId::MAX) {
                    return Err(format_err(
                        line_no,
                        format!("{} nodes exceed the supported id range", rows.max(cols)),
                    ));
                }
                // nnz is only a hint; a hostile header must not trigger a huge allocation.
                edges.reserve(nnz.min(1 << 20) as usize);
                dims = Some((rows, cols));
            }
            Some((rows, cols)) => {
                let row = parse_index(line_no, "row index", fields.next())?;
                let col = parse_index(line_no, "column index", fields.next())?;
                if row == 0 || col == 0 || row > rows || col > cols {
                    return Err(MtxError::Bounds {
                        line: line_no,
                        row,
                        col,
                        rows,
                        cols,
                    });
                }
                edges.push(((row - 1) as NodeId, (col - 1) as NodeId));
            }
        }
    }

    let (rows, cols) = dims.ok_or_else(|| format_err(line_no, "missing size line"))?;
    Ok(EdgeList {
        num_nodes_declared: rows.max(cols) as usize,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<EdgeList, MtxError> {
        parse_matrix_market(text.as_bytes())
    }

    #[test]
    fn translates_to_zero_based() {
        let el = parse("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(el.num_nodes_declared, 3);
        assert_eq!(el.edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn header_only_is_empty() {
        let el = parse("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 0\n").unwrap();
        assert_eq!(el.num_nodes_declared, 3);
        assert!(el.edges.is_empty());
    }

    #[test]
    fn out_of_range_entry() {
        let err = parse("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n4 1\n").unwrap_err();
        assert!(matches!(err, MtxError::Bounds { row: 4, col: 1, .. }), "{err}");
        let err = parse("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n0 1\n").unwrap_err();
        assert!(matches!(err, MtxError::Bounds { .. }));
    }

    #[test]
    fn skips_comments_and_values() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n\
                    % a comment\n\
                    %another\n\
                    4 4 2\n\
                    2 1 0.5\n\
                    \n\
                    % trailing comment\n\
                    4 3 -1e3\n";
        let el = parse(text).unwrap();
        assert_eq!(el.edges, vec![(1, 0), (3, 2)]);
    }

    #[test]
    fn rejects_bad_banner() {
        assert!(matches!(parse(""), Err(MtxError::Format { .. })));
        assert!(matches!(parse("3 3 0\n"), Err(MtxError::Format { .. })));
        assert!(matches!(
            parse("%%MatrixMarket matrix array real general\n3 3\n"),
            Err(MtxError::Format { .. })
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate real general\n"),
            Err(MtxError::Format { .. })
        ));
    }

    #[test]
    fn rejects_non_integer_coordinates() {
        let err = parse("%%MatrixMarket matrix coordinate real general\n3 3 1\n1.5 2 1\n").unwrap_err();
        assert!(matches!(err, MtxError::Parse { what: "row index", .. }), "{err}");
        let err = parse("%%MatrixMarket matrix coordinate real general\n3 x 1\n").unwrap_err();
        assert!(matches!(err, MtxError::Parse { .. }), "{err}");
        let err = parse("%%MatrixMarket matrix coordinate real general\n3 3 1\n1\n").unwrap_err();
        assert!(matches!(err, MtxError::Format { .. }), "{err}");
    }

    #[test]
    fn rectangular_uses_larger_dimension() {
        let el = parse("%%MatrixMarket matrix coordinate pattern general\n2 5 1\n1 5\n").unwrap();
        assert_eq!(el.num_nodes_declared, 5);
        assert_eq!(el.edges, vec![(0, 4)]);
    }
}
