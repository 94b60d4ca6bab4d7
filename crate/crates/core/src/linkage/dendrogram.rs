use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{canonical_edge_key, Dendrogram, EdgeList, Merge};
use crate::union_find::DisjointSet;

/// Turns spanning-tree edges into a linkage matrix.
///
/// Edges are sorted by `(weight, canonical key)` and merged in that order.
/// Merge `i` joins the current clusters of the edge's endpoints and creates
/// node `n_points + i`; the smaller child id is listed first.
pub fn build_dendrogram(mst_edges: &EdgeList, n_points: usize) -> Result<Dendrogram> {
    let expected = n_points.saturating_sub(1);
    if mst_edges.len() != expected {
        return Err(Error::InvalidTree(format!(
            "expected {expected} edges for {n_points} points, got {}",
            mst_edges.len()
        )));
    }
    let mut edges: Vec<(f64, (usize, usize))> = mst_edges
        .edges
        .iter()
        .map(|e| {
            if e.src >= n_points || e.dst >= n_points {
                return Err(Error::VertexOutOfRange {
                    vertex: e.src.max(e.dst),
                    n_vertices: n_points,
                });
            }
            Ok((e.weight, canonical_edge_key(e.src, e.dst)?))
        })
        .collect::<Result<_>>()?;
    edges.par_sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut sets = DisjointSet::new(n_points);
    // node id and size of the cluster rooted at each union-find root
    let mut node = (0..n_points).collect::<Vec<_>>();
    let mut size = vec![1usize; n_points];
    let mut merges = Vec::with_capacity(expected);
    for (i, &(weight, (a, b))) in edges.iter().enumerate() {
        let (ra, rb) = (sets.find(a), sets.find(b));
        if ra == rb {
            return Err(Error::InvalidTree(format!("edge ({a}, {b}) closes a cycle")));
        }
        let (na, nb) = (node[ra], node[rb]);
        let merged = size[ra] + size[rb];
        let root = sets.union(ra, rb).expect("distinct roots");
        node[root] = n_points + i;
        size[root] = merged;
        merges.push(Merge {
            child_a: na.min(nb),
            child_b: na.max(nb),
            distance: weight,
            size: merged,
        });
    }
    Ok(Dendrogram { n_points, merges })
}
