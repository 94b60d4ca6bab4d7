//! Shared containers: the point matrix, weighted edge lists, the symmetric
//! CSR graph consumed by the spanning-tree solver, per-vertex colors and the
//! linkage-matrix dendrogram.

use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{Error, Result};

/// Dense row-major `n_rows x n_cols` matrix of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl PointMatrix {
    pub fn new(n_rows: usize, n_cols: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows.checked_mul(n_cols) != Some(data.len()) {
            return Err(Error::DataLength {
                rows: n_rows,
                cols: n_cols,
                found: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / n_cols,
                col: pos % n_cols,
            });
        }
        Ok(PointMatrix {
            n_rows,
            n_cols,
            data,
        })
    }

    /// Widens 32-bit input to the 64-bit working precision.
    pub fn from_f32(n_rows: usize, n_cols: usize, data: &[f32]) -> Result<Self> {
        Self::new(n_rows, n_cols, data.iter().map(|&v| f64::from(v)).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Borrow a contiguous block of rows.
    pub fn rows(&self, range: Range<usize>) -> RowSlice<'_> {
        RowSlice {
            first_row: range.start,
            n_cols: self.n_cols,
            data: &self.data[range.start * self.n_cols..range.end * self.n_cols],
        }
    }

    pub fn all_rows(&self) -> RowSlice<'_> {
        self.rows(0..self.n_rows)
    }
}

/// A borrowed block of consecutive rows of a [`PointMatrix`].
#[derive(Debug, Clone, Copy)]
pub struct RowSlice<'a> {
    /// Row id of the first row in the parent matrix.
    pub first_row: usize,
    pub n_cols: usize,
    pub data: &'a [f64],
}

impl<'a> RowSlice<'a> {
    pub fn n_rows(&self) -> usize {
        if self.n_cols == 0 {
            0
        } else {
            self.data.len() / self.n_cols
        }
    }

    pub fn row(&self, i: usize) -> &'a [f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }
}

/// `(index, distance)` pair: the unit of every nearest-neighbour reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborPair {
    pub index: usize,
    pub distance: f64,
}

impl NeighborPair {
    pub const NONE: NeighborPair = NeighborPair {
        index: usize::MAX,
        distance: f64::INFINITY,
    };

    /// Total order used by all selections: distance first, then smaller id.
    pub fn cmp_key(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.index.cmp(&other.index))
    }

    pub fn is_none(&self) -> bool {
        self.index == usize::MAX
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Edge { src, dst, weight }
    }
}

/// Weighted edges over `n_vertices` vertices (COO form).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeList {
    pub n_vertices: usize,
    pub edges: Vec<Edge>,
}

impl EdgeList {
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        for e in &edges {
            for v in [e.src, e.dst] {
                if v >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        n_vertices,
                    });
                }
            }
        }
        Ok(EdgeList { n_vertices, edges })
    }

    pub fn empty(n_vertices: usize) -> Self {
        EdgeList {
            n_vertices,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Orders an undirected edge's endpoints so both directions share one key.
pub fn canonical_edge_key(src: usize, dst: usize) -> Result<(usize, usize)> {
    match src.cmp(&dst) {
        Ordering::Less => Ok((src, dst)),
        Ordering::Greater => Ok((dst, src)),
        Ordering::Equal => Err(Error::SelfLoop { vertex: src }),
    }
}

/// Symmetric weighted graph in compressed sparse row form. Column indices
/// within each row are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrGraph {
    n_vertices: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    weights: Vec<f64>,
}

impl CsrGraph {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of stored (directed) entries; twice the undirected edge count.
    pub fn n_entries(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn row_range(&self, v: usize) -> Range<usize> {
        self.row_offsets[v]..self.row_offsets[v + 1]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_range(v);
        self.col_indices[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// Slot index of entry `(src, dst)`, if present.
    pub fn find_slot(&self, src: usize, dst: usize) -> Option<usize> {
        let r = self.row_range(src);
        self.col_indices[r.clone()]
            .binary_search(&dst)
            .ok()
            .map(|i| r.start + i)
    }

    /// Same structure with a replacement weight array.
    pub fn with_weights(&self, weights: Vec<f64>) -> CsrGraph {
        assert_eq!(weights.len(), self.weights.len());
        CsrGraph {
            weights,
            ..self.clone()
        }
    }

    /// All stored entries in row order.
    pub fn iter_entries(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n_vertices).flat_map(move |v| self.neighbors(v).map(move |(d, w)| Edge::new(v, d, w)))
    }

    /// One edge per undirected pair, `src < dst`, in row order.
    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList {
            n_vertices: self.n_vertices,
            edges: self.iter_entries().filter(|e| e.src < e.dst).collect(),
        }
    }

    /// Checks that every entry `(i, j, w)` has a mirror `(j, i, w)`.
    pub fn is_symmetric(&self) -> bool {
        self.iter_entries().all(|e| {
            self.find_slot(e.dst, e.src)
                .is_some_and(|s| self.weights[s].to_bits() == e.weight.to_bits())
        })
    }
}

/// Builds the symmetric CSR form of an undirected edge list. Both directions
/// of every edge are stored; parallel edges collapse to their minimum weight.
pub fn edge_list_to_csr(g: &EdgeList) -> Result<CsrGraph> {
    let n = g.n_vertices;
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * g.edges.len());
    for e in &g.edges {
        for v in [e.src, e.dst] {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n_vertices: n,
                });
            }
        }
        canonical_edge_key(e.src, e.dst)?;
        entries.push((e.src, e.dst, e.weight));
        entries.push((e.dst, e.src, e.weight));
    }
    entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
    // sorted by weight within a (src, dst) run, so the first survivor is the minimum
    entries.dedup_by(|later, kept| later.0 == kept.0 && later.1 == kept.1);

    let mut row_offsets = vec![0usize; n + 1];
    for &(s, _, _) in &entries {
        row_offsets[s + 1] += 1;
    }
    for i in 0..n {
        row_offsets[i + 1] += row_offsets[i];
    }
    let (col_indices, weights) = entries.into_iter().map(|(_, d, w)| (d, w)).unzip();
    Ok(CsrGraph {
        n_vertices: n,
        row_offsets,
        col_indices,
        weights,
    })
}

/// Per-vertex component label. Canonical colorings label every vertex with
/// the smallest vertex id of its component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorArray {
    colors: Vec<usize>,
}

impl ColorArray {
    /// Every vertex in its own component.
    pub fn singletons(n: usize) -> Self {
        ColorArray {
            colors: (0..n).collect(),
        }
    }

    pub fn from_vec(colors: Vec<usize>) -> Self {
        ColorArray { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.colors
    }

    pub fn get(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn n_unique(&self) -> usize {
        // canonical colors are their own representative
        if self.is_canonical() {
            return self.colors.iter().enumerate().filter(|&(v, &c)| v == c).count();
        }
        let mut seen = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Every color is a vertex id that carries its own color and is no larger
    /// than any vertex it labels.
    pub fn is_canonical(&self) -> bool {
        self.colors
            .iter()
            .enumerate()
            .all(|(v, &c)| c <= v && self.colors.get(c) == Some(&c))
    }

    /// Sizes of each component keyed by color.
    pub fn component_sizes(&self) -> Vec<(usize, usize)> {
        let mut sorted = self.colors.clone();
        sorted.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for c in sorted {
            match out.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }
}

/// One linkage-matrix row. Merge `i` of a dendrogram over `N` points creates
/// node `N + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub child_a: usize,
    pub child_b: usize,
    pub distance: f64,
    pub size: usize,
}

/// Single-linkage merge table in linkage-matrix layout: `N - 1` rows of
/// `(child_a, child_b, distance, size)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub n_points: usize,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    pub fn parent_of_merge(&self, i: usize) -> usize {
        self.n_points + i
    }

    pub fn n_nodes(&self) -> usize {
        self.n_points + self.merges.len()
    }

    /// Checks the structural invariants: row count, child uniqueness, size
    /// conservation and non-decreasing distances.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n_points;
        if self.merges.len() != n.saturating_sub(1) {
            return Err(format!("expected {} merges, found {}", n.saturating_sub(1), self.merges.len()));
        }
        let mut size = vec![0usize; self.n_nodes()];
        size[..n].fill(1);
        let mut used = vec![false; self.n_nodes()];
        let mut prev = f64::NEG_INFINITY;
        for (i, m) in self.merges.iter().enumerate() {
            let parent = n + i;
            for c in [m.child_a, m.child_b] {
                if c >= parent {
                    return Err(format!("row {i}: child {c} not created before parent {parent}"));
                }
                if std::mem::replace(&mut used[c], true) {
                    return Err(format!("row {i}: node {c} merged twice"));
                }
            }
            if m.size != size[m.child_a] + size[m.child_b] {
                return Err(format!("row {i}: size {} != children sum", m.size));
            }
            if m.distance < prev {
                return Err(format!("row {i}: distance {} decreases", m.distance));
            }
            prev = m.distance;
            size[parent] = m.size;
        }
        Ok(())
    }
}
