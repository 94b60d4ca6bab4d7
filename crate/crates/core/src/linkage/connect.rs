//! Turning a k-NN spanning forest into the exact minimum spanning tree of
//! the complete distance graph.
//!
//! The k-NN graph can miss short edges between points whose neighbour lists
//! are already full of closer points, so its spanning forest may contain
//! edges that the complete graph's tree would not. Two steps repair that:
//!
//! * [`certified_subforest`] keeps only forest edges that provably belong to
//!   the complete-graph tree;
//! * [`connect_graph`] then grows the certified forest Borůvka-style, adding
//!   for each component its lightest edge to any other component, found with
//!   the color-masked fused 1-NN.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_edge_key, edge_list_to_csr, ColorArray, Edge, EdgeList, PointMatrix};
use crate::linkage::LinkageConfig;
use crate::mst::solve_distance_forest;
use crate::neighbors::{fused_1nn, KnnGraph, Metric};
use crate::union_find::DisjointSet;

fn edge_order(a: &Edge, b: &Edge) -> std::cmp::Ordering {
    a.weight
        .total_cmp(&b.weight)
        .then_with(|| (a.src.min(a.dst), a.src.max(a.dst)).cmp(&(b.src.min(b.dst), b.src.max(b.dst))))
}

/// Edges of a k-NN spanning forest that also belong to the minimum spanning
/// tree of the complete graph.
///
/// `radius[p]` is the distance from `p` to its k-th neighbour. Any point
/// closer to `p` than that radius is in `p`'s neighbour list. Take a forest
/// edge of weight `w` and the component `X` that lighter forest edges form
/// around one endpoint. If every point of `X` has a radius of at least `w`,
/// nothing outside `X` lies within `w` of it, so the edge is a lightest edge
/// leaving `X` in the complete graph.
pub fn certified_subforest(forest: &EdgeList, radius: &[f64]) -> EdgeList {
    let n = forest.n_vertices;
    let mut sorted = forest.edges.clone();
    sorted.sort_unstable_by(edge_order);

    let mut sets = DisjointSet::new(n);
    let mut min_radius = radius.to_vec();
    let mut kept = Vec::with_capacity(sorted.len());
    let mut start = 0;
    while start < sorted.len() {
        // components are those of strictly lighter edges, so judge a run of
        // equal weights before merging any of it
        let w = sorted[start].weight;
        let end = start + sorted[start..].partition_point(|e| e.weight == w);
        for e in &sorted[start..end] {
            let (ra, rb) = (sets.find(e.src), sets.find(e.dst));
            if min_radius[ra] >= w || min_radius[rb] >= w {
                kept.push(*e);
            }
        }
        for e in &sorted[start..end] {
            let (ra, rb) = (sets.find(e.src), sets.find(e.dst));
            if let Some(root) = sets.union(ra, rb) {
                min_radius[root] = min_radius[ra].min(min_radius[rb]);
            }
        }
        start = end;
    }
    EdgeList { n_vertices: n, edges: kept }
}

/// The lightest edge from each color to any other color, ordered by
/// `(weight, canonical key)`. An edge chosen by both of its colors appears
/// once.
///
/// With `knn`, a point whose list already reaches another color takes its
/// first such entry, and a point is searched exhaustively only if its k-th
/// neighbour distance does not already rule it out.
pub fn min_cross_color_edges(
    x: &PointMatrix,
    colors: &ColorArray,
    metric: Metric,
    knn: Option<&KnnGraph>,
) -> Result<EdgeList> {
    let n = x.n_rows();
    if colors.n_unique() < 2 {
        return Err(Error::AlreadyConnected);
    }
    let c = colors.as_slice();

    // per-point nearest other-color neighbour from its list, if any
    let from_list: Vec<Option<Edge>> = match knn {
        Some(g) => (0..n)
            .into_par_iter()
            .map(|p| {
                g.row_indices(p)
                    .iter()
                    .zip(g.row_distances(p))
                    .find(|(&q, _)| c[q] != c[p])
                    .map(|(&q, &d)| Edge::new(p, q, d))
            })
            .collect(),
        None => vec![None; n],
    };
    let mut best: Vec<Option<Edge>> = vec![None; n];
    let offer = |best: &mut Vec<Option<Edge>>, color: usize, e: Edge| {
        if best[color].is_none_or(|b| edge_order(&e, &b).is_lt()) {
            best[color] = Some(e);
        }
    };
    for e in from_list.iter().flatten() {
        offer(&mut best, c[e.src], *e);
    }

    let queries: Vec<usize> = (0..n)
        .filter(|&p| {
            from_list[p].is_none()
                && match (knn, best[c[p]]) {
                    (Some(g), Some(b)) => g.row_distances(p)[g.k() - 1] <= b.weight,
                    _ => true,
                }
        })
        .collect();
    if !queries.is_empty() {
        let dim = x.n_cols();
        let mut sub = Vec::with_capacity(queries.len() * dim);
        for &p in &queries {
            sub.extend_from_slice(x.row(p));
        }
        let sub = PointMatrix::new(queries.len(), dim, sub)?;
        let mask = |q: usize, r: usize| c[queries[q]] != c[r];
        let nearest = fused_1nn(&sub, x, metric, Some(&mask))?;
        for (qi, pair) in nearest.into_iter().enumerate() {
            let p = queries[qi];
            offer(&mut best, c[p], Edge::new(p, pair.index, pair.distance));
        }
    }

    let mut edges: Vec<Edge> = best
        .into_iter()
        .flatten()
        .map(|e| {
            let (a, b) = canonical_edge_key(e.src, e.dst).expect("cross-color edge is not a loop");
            Edge::new(a, b, e.weight)
        })
        .collect();
    edges.sort_unstable_by(edge_order);
    edges.dedup_by(|a, b| a.src == b.src && a.dst == b.dst);
    Ok(EdgeList { n_vertices: n, edges })
}

/// Connects a spanning forest of `x` into one tree. Each round adds every
/// component's lightest edge to another component and re-solves the tree
/// over the accumulated edges; components at least halve per round.
pub fn connect_graph(
    x: &PointMatrix,
    mst_edges: &EdgeList,
    colors: &ColorArray,
    cfg: &LinkageConfig,
) -> Result<EdgeList> {
    connect_graph_with(x, mst_edges, colors, cfg, None).map(|(edges, _)| edges)
}

/// [`connect_graph`] that can use the k-NN lists to skip exhaustive
/// searches. Also returns the number of rounds. Weights of the returned tree
/// are recomputed with [`refine_edge_weights`].
pub fn connect_graph_with(
    x: &PointMatrix,
    mst_edges: &EdgeList,
    colors: &ColorArray,
    cfg: &LinkageConfig,
    knn: Option<&KnnGraph>,
) -> Result<(EdgeList, usize)> {
    let cap = cfg.connect_iteration_cap(x.n_rows());
    let mut edges = mst_edges.clone();
    let mut colors = colors.clone();
    let mut iterations = 0;
    while colors.n_unique() != 1 {
        if iterations == cap {
            let sizes = colors.component_sizes();
            return Err(Error::ConnectDidNotConverge {
                iterations,
                components: sizes.len(),
                largest: sizes.iter().map(|s| s.1).max().unwrap_or(0),
            });
        }
        let bridges = min_cross_color_edges(x, &colors, cfg.metric, knn)?;
        edges.edges.extend(bridges.edges);
        let solved = solve_distance_forest(&edge_list_to_csr(&edges)?, cfg.seed)?;
        edges = solved.edges;
        colors = solved.colors;
        iterations += 1;
    }
    Ok((refine_edge_weights(x, &edges, cfg.metric), iterations))
}

/// Recomputes tree edge weights by direct summation of squared coordinate
/// differences. The expanded form used by the search kernels loses precision
/// when two points are close relative to their norms; merge heights should
/// not.
pub fn refine_edge_weights(x: &PointMatrix, tree: &EdgeList, metric: Metric) -> EdgeList {
    let edges = tree
        .edges
        .par_iter()
        .map(|e| {
            let sq: f64 = x.row(e.src).iter().zip(x.row(e.dst)).map(|(a, b)| (a - b) * (a - b)).sum();
            Edge::new(e.src, e.dst, metric.from_squared(sq))
        })
        .collect();
    EdgeList {
        n_vertices: tree.n_vertices,
        edges,
    }
}
