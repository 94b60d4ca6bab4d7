//! Brute-force nearest neighbours with selection fused into the tiled
//! distance computation.
//!
//! Distances use the expanded form `|x|^2 + |y|^2 - 2<x, y>` with row norms
//! computed once up front. Each `(x, y)` pair is evaluated by the same
//! arithmetic no matter which tile it falls in, so results do not depend on
//! the tile shape or on how tiles are scheduled across threads.
//!
//! `fused_knn` splits the `N x N` problem into `batch_m x batch_n` tiles that
//! are processed in parallel. A tile keeps a bounded top-k per query row,
//! skipping every candidate already worse than the row's current k-th best
//! distance, and then merges its survivors into the row block's shared state
//! while holding that block's lock.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{ColorArray, Edge, EdgeList, NeighborPair, PointMatrix, RowSlice};

/// Supported distances. Both are monotone in each other, so neighbour sets
/// and spanning trees agree; only reported values differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Metric {
    #[default]
    SqEuclidean,
    Euclidean,
}

impl Metric {
    /// Maps a squared Euclidean distance to this metric.
    #[inline]
    pub fn from_squared(self, sq: f64) -> f64 {
        match self {
            Metric::SqEuclidean => sq,
            Metric::Euclidean => sq.sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::SqEuclidean => "sqeuclidean",
            Metric::Euclidean => "euclidean",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sqeuclidean" => Ok(Metric::SqEuclidean),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(format!("unknown metric '{other}' (expected euclidean or sqeuclidean)")),
        }
    }
}

/// Tile shape: `batch_m` query rows by `batch_n` index rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileSpec {
    batch_m: usize,
    batch_n: usize,
}

impl TileSpec {
    pub fn new(batch_m: usize, batch_n: usize) -> Result<Self> {
        if batch_m == 0 || batch_n == 0 {
            return Err(Error::InvalidTile { batch_m, batch_n });
        }
        Ok(TileSpec { batch_m, batch_n })
    }

    /// Square tiles of side `n`.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn batch_m(&self) -> usize {
        self.batch_m
    }

    pub fn batch_n(&self) -> usize {
        self.batch_n
    }
}

impl Default for TileSpec {
    fn default() -> Self {
        TileSpec {
            batch_m: 64,
            batch_n: 256,
        }
    }
}

/// `N x k` neighbour table. Row `i` lists the `k` nearest other points in
/// ascending `(distance, id)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnGraph {
    n_rows: usize,
    k: usize,
    indices: Vec<usize>,
    distances: Vec<f64>,
}

impl KnnGraph {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn row_indices(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    pub fn row_distances(&self, i: usize) -> &[f64] {
        &self.distances[i * self.k..(i + 1) * self.k]
    }

    /// Directed `i -> neighbour` edges; symmetrise with `edge_list_to_csr`.
    pub fn to_edge_list(&self) -> EdgeList {
        let edges = (0..self.n_rows)
            .flat_map(|i| {
                self.row_indices(i)
                    .iter()
                    .zip(self.row_distances(i))
                    .map(move |(&j, &d)| Edge::new(i, j, d))
            })
            .collect();
        EdgeList {
            n_vertices: self.n_rows,
            edges,
        }
    }
}

pub fn row_norms(rows: RowSlice<'_>) -> Vec<f64> {
    (0..rows.n_rows()).map(|i| dot(rows.row(i), rows.row(i))).collect()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let o = c * 4;
        acc[0] += a[o] * b[o];
        acc[1] += a[o + 1] * b[o + 1];
        acc[2] += a[o + 2] * b[o + 2];
        acc[3] += a[o + 3] * b[o + 3];
    }
    let mut tail = 0.0;
    for i in chunks * 4..a.len() {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn expanded_sq(norm_q: f64, norm_r: f64, dot: f64) -> f64 {
    // cancellation can push the expanded form slightly below zero
    (norm_q + norm_r - 2.0 * dot).max(0.0)
}

/// Squared distances for every `(query, index)` pair of a tile, row-major.
fn fill_tile(
    queries: RowSlice<'_>,
    query_norms: &[f64],
    index: RowSlice<'_>,
    index_norms: &[f64],
    out: &mut Vec<f64>,
) {
    let (nq, nr) = (queries.n_rows(), index.n_rows());
    out.clear();
    out.reserve(nq * nr);
    for q in 0..nq {
        let xq = queries.row(q);
        let norm_q = query_norms[q];
        for r in 0..nr {
            out.push(expanded_sq(norm_q, index_norms[r], dot(xq, index.row(r))));
        }
    }
}

/// Dense distance tile between two row blocks, row-major `queries x index`.
/// Returns squared distances when `squared` is set, Euclidean otherwise.
pub fn pairwise_l2_tile(queries: RowSlice<'_>, index: RowSlice<'_>, squared: bool) -> Result<Vec<f64>> {
    if queries.n_cols != index.n_cols {
        return Err(Error::DimensionMismatch {
            expected: queries.n_cols,
            found: index.n_cols,
        });
    }
    let mut out = Vec::new();
    fill_tile(queries, &row_norms(queries), index, &row_norms(index), &mut out);
    if !squared {
        out.iter_mut().for_each(|d| *d = d.sqrt());
    }
    Ok(out)
}

/// Bounded ascending selection of the `k` best neighbours.
#[derive(Debug, Clone)]
struct TopK {
    k: usize,
    items: Vec<NeighborPair>,
}

impl TopK {
    fn new(k: usize) -> Self {
        TopK {
            k,
            items: Vec::with_capacity(k),
        }
    }

    /// Distance a candidate has to beat (or tie) to be considered.
    #[inline]
    fn bound(&self) -> f64 {
        if self.items.len() < self.k {
            f64::INFINITY
        } else {
            self.items[self.k - 1].distance
        }
    }

    #[inline]
    fn push(&mut self, p: NeighborPair) {
        if self.items.len() == self.k && p.cmp_key(&self.items[self.k - 1]).is_ge() {
            return;
        }
        let pos = self.items.partition_point(|x| x.cmp_key(&p).is_lt());
        self.items.insert(pos, p);
        self.items.truncate(self.k);
    }

    fn clear(&mut self) {
        self.items.clear();
    }
}

/// Exact k nearest neighbours of every row of `x` among the other rows.
pub fn fused_knn(x: &PointMatrix, k: usize, metric: Metric, tile: TileSpec) -> Result<KnnGraph> {
    let n = x.n_rows();
    if k == 0 || k >= n {
        return Err(Error::InvalidK {
            k,
            n_rows: n,
            max: n.saturating_sub(1),
        });
    }
    let norms = row_norms(x.all_rows());
    let (bm, bn) = (tile.batch_m.min(n), tile.batch_n.min(n));
    let n_qb = n.div_ceil(bm);
    let n_ib = n.div_ceil(bn);

    let blocks: Vec<Mutex<Vec<TopK>>> = (0..n_qb)
        .map(|qb| {
            let rows = bm.min(n - qb * bm);
            Mutex::new(vec![TopK::new(k); rows])
        })
        .collect();
    let thresholds: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(f64::INFINITY.to_bits())).collect();

    (0..n_qb * n_ib).into_par_iter().for_each_init(
        || (Vec::new(), Vec::<TopK>::new()),
        |(buf, local), work| {
            let (qb, ib) = (work / n_ib, work % n_ib);
            let q_range = qb * bm..((qb + 1) * bm).min(n);
            let r_range = ib * bn..((ib + 1) * bn).min(n);
            let q_rows = x.rows(q_range.clone());
            let r_rows = x.rows(r_range.clone());
            fill_tile(q_rows, &norms[q_range.clone()], r_rows, &norms[r_range.clone()], buf);

            let width = r_range.len();
            local.resize(q_range.len(), TopK::new(k));
            for (qi, q) in q_range.clone().enumerate() {
                let top = &mut local[qi];
                top.clear();
                let mut bound = f64::from_bits(thresholds[q].load(AtomicOrdering::Relaxed));
                for (ri, r) in r_range.clone().enumerate() {
                    let d = buf[qi * width + ri];
                    // equal distances survive: the id tie-break decides them
                    if d > bound || r == q {
                        continue;
                    }
                    top.push(NeighborPair { index: r, distance: d });
                    bound = bound.min(top.bound());
                }
            }

            let mut shared = blocks[qb].lock().expect("row block lock poisoned");
            for (qi, q) in q_range.enumerate() {
                let global = &mut shared[qi];
                for &p in &local[qi].items {
                    global.push(p);
                }
                thresholds[q].store(global.bound().to_bits(), AtomicOrdering::Relaxed);
            }
        },
    );

    let mut indices = Vec::with_capacity(n * k);
    let mut distances = Vec::with_capacity(n * k);
    for block in blocks {
        for mut top in block.into_inner().expect("row block lock poisoned") {
            debug_assert_eq!(top.items.len(), k);
            for p in &mut top.items {
                p.distance = metric.from_squared(p.distance);
            }
            // sqrt may merge distinct squared values; restore the id tie-break
            top.items.sort_by(|a, b| a.cmp_key(b));
            for p in top.items {
                indices.push(p.index);
                distances.push(p.distance);
            }
        }
    }
    Ok(KnnGraph {
        n_rows: n,
        k,
        indices,
        distances,
    })
}

/// Predicate deciding whether `(query, candidate)` may be paired.
pub type Admissible<'a> = &'a (dyn Fn(usize, usize) -> bool + Sync);

/// Nearest admissible index row for every query row, with a default tile.
pub fn fused_1nn(
    queries: &PointMatrix,
    index: &PointMatrix,
    metric: Metric,
    mask: Option<Admissible<'_>>,
) -> Result<Vec<NeighborPair>> {
    fused_1nn_tiled(queries, index, metric, mask, TileSpec::default())
}

/// [`fused_1nn`] with an explicit tile shape. Each query keeps a single
/// running minimum while tiles stream past; the full distance matrix is never
/// stored.
pub fn fused_1nn_tiled(
    queries: &PointMatrix,
    index: &PointMatrix,
    metric: Metric,
    mask: Option<Admissible<'_>>,
    tile: TileSpec,
) -> Result<Vec<NeighborPair>> {
    if queries.n_cols() != index.n_cols() {
        return Err(Error::DimensionMismatch {
            expected: queries.n_cols(),
            found: index.n_cols(),
        });
    }
    let (nq, nr) = (queries.n_rows(), index.n_rows());
    let q_norms = row_norms(queries.all_rows());
    let r_norms = row_norms(index.all_rows());
    let bm = tile.batch_m;
    let bn = tile.batch_n;

    let mut out = vec![NeighborPair::NONE; nq];
    out.par_chunks_mut(bm).enumerate().for_each(|(qb, best)| {
        let q_start = qb * bm;
        let q_range = q_start..q_start + best.len();
        let q_rows = queries.rows(q_range.clone());
        let mut buf = Vec::new();
        let mut r_start = 0;
        while r_start < nr {
            let r_range = r_start..(r_start + bn).min(nr);
            fill_tile(q_rows, &q_norms[q_range.clone()], index.rows(r_range.clone()), &r_norms[r_range.clone()], &mut buf);
            let width = r_range.len();
            for (qi, slot) in best.iter_mut().enumerate() {
                let q = q_start + qi;
                for (ri, r) in r_range.clone().enumerate() {
                    let d = buf[qi * width + ri];
                    if d > slot.distance || mask.is_some_and(|m| !m(q, r)) {
                        continue;
                    }
                    let cand = NeighborPair { index: r, distance: d };
                    if cand.cmp_key(slot).is_lt() {
                        *slot = cand;
                    }
                }
            }
            r_start = r_range.end;
        }
    });

    if let Some(query) = out.iter().position(NeighborPair::is_none) {
        return Err(Error::NoAdmissibleCandidate { query });
    }
    for p in &mut out {
        p.distance = metric.from_squared(p.distance);
    }
    Ok(out)
}

/// For every point, an edge to its nearest point of a different color.
pub fn cross_color_1nn(x: &PointMatrix, colors: &ColorArray, metric: Metric) -> Result<EdgeList> {
    if colors.len() != x.n_rows() {
        return Err(Error::DimensionMismatch {
            expected: x.n_rows(),
            found: colors.len(),
        });
    }
    if colors.n_unique() < 2 {
        return Err(Error::AlreadyConnected);
    }
    let c = colors.as_slice();
    let mask = |q: usize, r: usize| c[q] != c[r];
    let nearest = fused_1nn(x, x, metric, Some(&mask))?;
    let edges = nearest
        .into_iter()
        .enumerate()
        .map(|(i, p)| Edge::new(i, p.index, p.distance))
        .collect();
    Ok(EdgeList {
        n_vertices: x.n_rows(),
        edges,
    })
}
