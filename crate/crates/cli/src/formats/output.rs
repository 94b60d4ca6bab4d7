//! Numeric CSV writers. Floats use Rust's shortest round-trip formatting,
//! so identical results give byte-identical files.

use std::io::{self, Write};

use slinkage::{Dendrogram, EdgeList, KnnGraph};

/// One label per line, in row order.
pub fn write_labels<W: Write>(mut w: W, labels: &[usize]) -> io::Result<()> {
    for l in labels {
        writeln!(w, "{l}")?;
    }
    w.flush()
}

/// `child_a,child_b,distance,size` per merge.
pub fn write_dendrogram<W: Write>(mut w: W, d: &Dendrogram) -> io::Result<()> {
    for m in &d.merges {
        writeln!(w, "{},{},{},{}", m.child_a, m.child_b, m.distance, m.size)?;
    }
    w.flush()
}

/// Neighbour ids and distances, one row per point, nearest first.
pub fn write_knn<W: Write, V: Write>(mut indices: W, mut distances: V, g: &KnnGraph) -> io::Result<()> {
    for i in 0..g.n_rows() {
        write_row(&mut indices, g.row_indices(i))?;
        write_row(&mut distances, g.row_distances(i))?;
    }
    indices.flush()?;
    distances.flush()
}

fn write_row<W: Write, T: std::fmt::Display>(w: &mut W, row: &[T]) -> io::Result<()> {
    for (j, v) in row.iter().enumerate() {
        if j > 0 {
            w.write_all(b",")?;
        }
        write!(w, "{v}")?;
    }
    w.write_all(b"\n")
}

/// `src,dst,weight` per tree edge, zero-based ids.
pub fn write_mst<W: Write>(mut w: W, edges: &EdgeList) -> io::Result<()> {
    for e in &edges.edges {
        writeln!(w, "{},{},{}", e.src, e.dst, e.weight)?;
    }
    w.flush()
}
