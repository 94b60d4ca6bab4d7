//! Borůvka-style minimum spanning forest over a symmetric CSR graph.
//!
//! Components are never contracted. Instead every vertex carries a color
//! (the smallest vertex id of its component) and each round:
//!
//! 1. every vertex scans its row for the lightest edge leaving its color and
//!    folds it into a per-color atomic minimum;
//! 2. the vertex whose edge won for its color contributes that edge;
//! 3. colors are merged along the new edges only.
//!
//! The loop stops as soon as a round adds no edge, which yields a spanning
//! forest for disconnected inputs. Weight alteration makes the per-color
//! minimum unique, so concurrent selections never close a cycle.

mod alteration;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use alteration::alter_weights;
pub use alteration::{edge_noise, min_weight_gap, weight_alteration, AlteredGraph, RankedEdge};

use crate::error::{Error, Result};
use crate::graph::{ColorArray, CsrGraph, Edge, EdgeList};

/// Output of one minimum-edge scan. Edges are identified by their rank in
/// the altered graph's total order; smaller rank means lighter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinEdges {
    /// Lightest edge from each vertex into a different color.
    pub per_vertex: Vec<Option<usize>>,
    /// Lightest edge leaving each color, indexed by color id.
    pub per_color: Vec<Option<usize>>,
}

pub fn min_edge_per_vertex(g: &AlteredGraph, colors: &ColorArray) -> MinEdges {
    let csr = g.graph();
    let n = csr.n_vertices();
    let c = colors.as_slice();
    let color_min: Vec<AtomicUsize> = (0..n).map(|_| AtomicUsize::new(usize::MAX)).collect();

    let per_vertex: Vec<Option<usize>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let mine = c[v];
            let best = csr
                .row_range(v)
                .filter(|&slot| c[csr.col_indices()[slot]] != mine)
                .map(|slot| g.rank_of_slot(slot))
                .min();
            if let Some(rank) = best {
                color_min[mine].fetch_min(rank, Ordering::Relaxed);
            }
            best
        })
        .collect();

    let per_color = color_min
        .into_iter()
        .map(|a| Some(a.into_inner()).filter(|&r| r != usize::MAX))
        .collect();
    MinEdges { per_vertex, per_color }
}

/// Edges (as ranks, ascending) that won the minimum for at least one color.
/// An edge chosen from both sides appears once.
pub fn min_edge_per_supervertex(candidates: &MinEdges, colors: &ColorArray) -> Vec<usize> {
    let c = colors.as_slice();
    let mut accepted: Vec<usize> = candidates
        .per_vertex
        .par_iter()
        .enumerate()
        .filter_map(|(v, &cand)| cand.filter(|&r| candidates.per_color[c[v]] == Some(r)))
        .collect();
    accepted.par_sort_unstable();
    accepted.dedup();
    accepted
}

/// Merges colors along `new_edges` until no color changes. Each component of
/// the union ends up colored with the smallest color it contains.
pub fn label_propagation(new_edges: &[(usize, usize)], colors: &ColorArray) -> ColorArray {
    let mut colors = colors.clone().into_vec();
    let n = colors.len();
    let next_color: Vec<AtomicUsize> = (0..n).map(AtomicUsize::new).collect();
    loop {
        next_color
            .par_iter()
            .enumerate()
            .for_each(|(i, a)| a.store(i, Ordering::Relaxed));

        // pull each supervertex toward the smallest color across its new edges
        new_edges.par_iter().for_each(|&(u, v)| {
            let (cu, cv) = (colors[u], colors[v]);
            next_color[cu].fetch_min(cv, Ordering::Relaxed);
            next_color[cv].fetch_min(cu, Ordering::Relaxed);
        });

        let done = AtomicBool::new(true);
        colors.par_iter_mut().for_each(|c| {
            let proposed = next_color[*c].load(Ordering::Relaxed);
            if proposed < *c {
                *c = proposed;
                done.store(false, Ordering::Relaxed);
            }
        });
        if done.into_inner() {
            return ColorArray::from_vec(colors);
        }
    }
}

/// Spanning tree (or forest) edges with their original weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MstResult {
    pub edges: EdgeList,
    pub colors: ColorArray,
    pub n_components: usize,
    /// Borůvka rounds that added at least one edge.
    pub iterations: usize,
}

/// Minimum (or, with `maximize`, maximum) spanning forest of `g`.
///
/// Output edges are `(min id, max id, weight)` in ascending solver order and
/// carry the input weights. A fixed `(g, maximize, seed)` gives the same
/// result on any thread count.
pub fn solve_mst(g: &CsrGraph, maximize: bool, seed: u64) -> Result<MstResult> {
    solve(g, maximize, seed, false)
}

/// Minimum spanning forest of a distance graph, where zero weights
/// (coincident points) are ordinary edges.
pub(crate) fn solve_distance_forest(g: &CsrGraph, seed: u64) -> Result<MstResult> {
    solve(g, false, seed, true)
}

fn solve(g: &CsrGraph, maximize: bool, seed: u64, allow_zero: bool) -> Result<MstResult> {
    let n = g.n_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let altered = if maximize {
        alter_weights(&g.with_weights(g.weights().iter().map(|w| -w).collect()), seed, allow_zero)?
    } else {
        alter_weights(g, seed, allow_zero)?
    };

    let mut colors = ColorArray::singletons(n);
    let mut accepted: Vec<usize> = Vec::with_capacity(n.saturating_sub(1));
    let mut iterations = 0;
    loop {
        let candidates = min_edge_per_vertex(&altered, &colors);
        let new_edges = min_edge_per_supervertex(&candidates, &colors);
        if new_edges.is_empty() {
            break;
        }
        iterations += 1;
        let pairs: Vec<(usize, usize)> = new_edges
            .iter()
            .map(|&r| {
                let e = altered.edge(r);
                (e.src, e.dst)
            })
            .collect();
        accepted.extend_from_slice(&new_edges);
        colors = label_propagation(&pairs, &colors);
    }

    accepted.sort_unstable();
    let sign = if maximize { -1.0 } else { 1.0 };
    let edges = accepted
        .iter()
        .map(|&r| {
            let e = altered.edge(r);
            Edge::new(e.src, e.dst, sign * e.original)
        })
        .collect();
    let n_components = colors.n_unique();
    Ok(MstResult {
        edges: EdgeList { n_vertices: n, edges },
        colors,
        n_components,
        iterations,
    })
}
