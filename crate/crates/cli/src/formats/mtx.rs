use slinkage::{Edge, EdgeList};

use super::{excerpt, utf8, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtxSymmetry {
    General,
    Symmetric,
}

/// Undirected graph read from a square Matrix Market coordinate file.
#[derive(Debug, Clone, PartialEq)]
pub struct MtxGraph {
    pub symmetry: MtxSymmetry,
    /// Off-diagonal entries as listed. Converting to CSR keeps the lighter
    /// of `(i, j)` and `(j, i)` when a general file lists both.
    pub edges: EdgeList,
    /// Diagonal entries, which are dropped.
    pub skipped_diagonal: usize,
}

impl MtxGraph {
    pub fn n_vertices(&self) -> usize {
        self.edges.n_vertices
    }
}

/// Parses a `matrix coordinate` file with field `real`, `integer` or
/// `pattern` (unit weights) and symmetry `general` or `symmetric`.
/// Zero and non-finite weights are rejected.
pub fn parse_matrix_market(bytes: &[u8]) -> Result<MtxGraph, ParseError> {
    let text = utf8(bytes)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (_, header) = lines.next().ok_or_else(|| ParseError::line(1, "empty input"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(ParseError::line(1, "missing %%MatrixMarket header"));
    }
    if tokens.len() != 5 {
        return Err(ParseError::line(1, "header needs object, format, field and symmetry"));
    }
    if tokens[1] != "matrix" {
        return Err(ParseError::line(1, format!("unsupported object {}", excerpt(&tokens[1]))));
    }
    if tokens[2] != "coordinate" {
        return Err(ParseError::line(1, format!("unsupported format {}, expected coordinate", excerpt(&tokens[2]))));
    }
    let pattern = match tokens[3].as_str() {
        "real" | "integer" | "double" => false,
        "pattern" => true,
        other => return Err(ParseError::line(1, format!("unsupported field {}", excerpt(other)))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => MtxSymmetry::General,
        "symmetric" => MtxSymmetry::Symmetric,
        other => return Err(ParseError::line(1, format!("unsupported symmetry {}", excerpt(other)))),
    };

    let mut content = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = content.next().ok_or_else(|| ParseError::line(1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(ParseError::line(size_line, "size line needs rows, columns and entry count"));
    }
    let parse_count = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseError::line(size_line, format!("cannot parse {what} {}", excerpt(s))))
    };
    let rows = parse_count(dims[0], "row count")?;
    let cols = parse_count(dims[1], "column count")?;
    let nnz = parse_count(dims[2], "entry count")?;
    if rows != cols {
        return Err(ParseError::line(size_line, format!("adjacency matrix must be square, got {rows} x {cols}")));
    }
    if rows == 0 {
        return Err(ParseError::line(size_line, "graph has no vertices"));
    }

    let mut edges = Vec::with_capacity(nnz.min(1 << 20));
    let mut skipped_diagonal = 0;
    let mut seen = 0;
    let mut last_line = size_line;
    for (lineno, line) in content {
        last_line = lineno;
        if seen == nnz {
            return Err(ParseError::line(lineno, format!("more than {nnz} entries")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let want = if pattern { 2 } else { 3 };
        if fields.len() != want {
            return Err(ParseError::line(lineno, format!("expected {want} fields, found {}", fields.len())));
        }
        let index = |s: &str| -> Result<usize, ParseError> {
            match s.parse::<usize>() {
                Ok(i) if (1..=rows).contains(&i) => Ok(i - 1),
                Ok(i) => Err(ParseError::line(lineno, format!("index {i} outside 1..={rows}"))),
                Err(_) => Err(ParseError::line(lineno, format!("cannot parse index {}", excerpt(s)))),
            }
        };
        let (i, j) = (index(fields[0])?, index(fields[1])?);
        let w = if pattern {
            1.0
        } else {
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| ParseError::line(lineno, format!("cannot parse weight {}", excerpt(fields[2]))))?;
            if !w.is_finite() {
                return Err(ParseError::line(lineno, "weight is not finite"));
            }
            if w == 0.0 {
                return Err(ParseError::line(
                    lineno,
                    format!("edge ({}, {}) has zero weight, which is not supported", i + 1, j + 1),
                ));
            }
            w
        };
        seen += 1;
        if i == j {
            skipped_diagonal += 1;
        } else {
            edges.push(Edge::new(i, j, w));
        }
    }
    if seen != nnz {
        return Err(ParseError::line(last_line, format!("expected {nnz} entries, found {seen}")));
    }
    let edges = EdgeList::new(rows, edges).map_err(|e| ParseError::line(last_line, e.to_string()))?;
    Ok(MtxGraph {
        symmetry,
        edges,
        skipped_diagonal,
    })
}
