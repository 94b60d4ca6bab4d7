use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Dendrogram;

/// Flat cluster assignment, one label in `0..n_clusters` per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelArray {
    pub labels: Vec<usize>,
    pub n_clusters: usize,
}

impl LabelArray {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }
}

/// Number of merges kept when cutting `n_points` down to `n_clusters`.
pub fn compute_cut_level(n_points: usize, n_clusters: usize) -> Result<usize> {
    if n_clusters == 0 || n_clusters > n_points {
        return Err(Error::InvalidClusterCount { n_clusters, n_points });
    }
    Ok((n_points - 1) - (n_clusters - 1))
}

/// Roots of the `n_clusters` subtrees left after removing the top
/// `n_clusters - 1` merges, ascending.
///
/// The children of the removed merges are sorted and the smallest
/// `n_clusters` kept: the others are themselves removed merges, whose ids
/// are all at least `n_points + cut_level`.
pub fn label_roots(d: &Dendrogram, n_clusters: usize) -> Result<Vec<usize>> {
    let n = d.n_points;
    let cut = compute_cut_level(n, n_clusters)?;
    if n_clusters == 1 {
        return Ok(vec![d.n_nodes() - 1]);
    }
    let mut candidates: Vec<usize> = d.merges[cut..]
        .iter()
        .flat_map(|m| [m.child_a, m.child_b])
        .collect();
    candidates.sort_unstable();
    candidates.truncate(n_clusters);
    debug_assert!(candidates.iter().all(|&c| c < n + cut));
    Ok(candidates)
}

/// Labels every original point with the label of its closest labelled
/// ancestor. `roots[i]` receives label `i`.
///
/// The ancestor walks run in parallel as pointer jumping: each node points
/// at its parent until it reaches a labelled node, and pointers are squared
/// until nothing changes, so the number of rounds is logarithmic in the tree
/// depth.
pub fn inherit_labels(d: &Dendrogram, cut_level: usize, roots: &[usize]) -> Vec<usize> {
    let n = d.n_points;
    // nodes created above the cut never sit between a point and its root
    let n_nodes = (n + cut_level).max(roots.iter().map(|r| r + 1).max().unwrap_or(0));
    let mut label = vec![usize::MAX; n_nodes];
    for (l, &r) in roots.iter().enumerate() {
        label[r] = l;
    }
    let mut ptr: Vec<usize> = (0..n_nodes).collect();
    for (i, m) in d.merges[..cut_level].iter().enumerate() {
        for c in [m.child_a, m.child_b] {
            if label[c] == usize::MAX {
                ptr[c] = n + i;
            }
        }
    }
    loop {
        let next: Vec<usize> = ptr.par_iter().map(|&p| ptr[p]).collect();
        if next == ptr {
            break;
        }
        ptr = next;
    }
    (0..n).into_par_iter().map(|p| label[ptr[p]]).collect()
}

/// Cuts the dendrogram into `n_clusters` flat clusters. Labels follow the
/// ascending order of the subtree root ids.
pub fn extract_clusters(d: &Dendrogram, n_clusters: usize) -> Result<LabelArray> {
    let cut = compute_cut_level(d.n_points, n_clusters)?;
    let roots = label_roots(d, n_clusters)?;
    let labels = inherit_labels(d, cut, &roots);
    debug_assert!(labels.iter().all(|&l| l < n_clusters));
    Ok(LabelArray { labels, n_clusters })
}
