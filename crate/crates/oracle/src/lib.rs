//! Slow, obviously-correct reference implementations.
//!
//! Nothing in here shares code with the `slinkage` crate. Every routine works
//! on plain slices and tuples so it can serve as an independent oracle for the
//! tiled, parallel, and fused code paths there.

use std::cmp::Ordering;
use std::collections::HashMap;

/// An undirected weighted edge `(src, dst, weight)`.
pub type Edge = (usize, usize, f64);

/// Squared Euclidean distance by direct summation of `(a_i - b_i)^2`.
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn row(data: &[f64], dim: usize, i: usize) -> &[f64] {
    &data[i * dim..(i + 1) * dim]
}

/// Full `n x m` distance matrix between `queries` and `index`.
pub fn distance_matrix(queries: &[f64], index: &[f64], dim: usize, squared: bool) -> Vec<Vec<f64>> {
    let n = queries.len() / dim;
    let m = index.len() / dim;
    (0..n)
        .map(|q| {
            (0..m)
                .map(|r| {
                    let d = sq_dist(row(queries, dim, q), row(index, dim, r));
                    if squared {
                        d
                    } else {
                        d.sqrt()
                    }
                })
                .collect()
        })
        .collect()
}

fn by_distance_then_id(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0))
}

/// k nearest neighbours of every row against every other row: materialise the
/// whole row of distances, sort it, keep the first `k` (self excluded).
pub fn knn_by_sort(data: &[f64], dim: usize, k: usize, squared: bool) -> Vec<Vec<(usize, f64)>> {
    let n = data.len() / dim;
    let dists = distance_matrix(data, data, dim, squared);
    (0..n)
        .map(|q| {
            let mut row: Vec<(usize, f64)> =
                (0..n).filter(|&r| r != q).map(|r| (r, dists[q][r])).collect();
            row.sort_by(by_distance_then_id);
            row.truncate(k);
            row
        })
        .collect()
}

/// Argmin over a materialised distance matrix, restricted to admissible
/// `(query, candidate)` pairs. Ties go to the smaller candidate id.
pub fn masked_argmin<F>(
    queries: &[f64],
    index: &[f64],
    dim: usize,
    squared: bool,
    admissible: F,
) -> Vec<Option<(usize, f64)>>
where
    F: Fn(usize, usize) -> bool,
{
    let dists = distance_matrix(queries, index, dim, squared);
    dists
        .iter()
        .enumerate()
        .map(|(q, row)| {
            let mut best: Option<(usize, f64)> = None;
            for (r, &d) in row.iter().enumerate() {
                if !admissible(q, r) {
                    continue;
                }
                match best {
                    Some((_, bd)) if bd <= d => {}
                    _ => best = Some((r, d)),
                }
            }
            best
        })
        .collect()
}

/// Plain disjoint-set forest with path halving and no rank heuristic.
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller id as the representative
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct Forest {
    pub edges: Vec<Edge>,
    pub total_weight: f64,
    pub n_components: usize,
}

/// Kruskal's algorithm. Edges are sorted by `(weight, min(src,dst), max(src,dst))`.
pub fn kruskal(n: usize, edges: &[Edge]) -> Forest {
    let mut sorted: Vec<Edge> = edges.iter().filter(|e| e.0 != e.1).copied().collect();
    sorted.sort_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .unwrap()
            .then(a.0.min(a.1).cmp(&b.0.min(b.1)))
            .then(a.0.max(a.1).cmp(&b.0.max(b.1)))
    });
    let mut dsu = Dsu::new(n);
    let mut out = Vec::new();
    for e in sorted {
        if dsu.union(e.0, e.1) {
            out.push(e);
        }
    }
    let total_weight = out.iter().map(|e| e.2).sum();
    Forest {
        n_components: n - out.len(),
        edges: out,
        total_weight,
    }
}

/// Connected components; each vertex is labelled with the smallest vertex id
/// in its component.
pub fn min_id_components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut dsu = Dsu::new(n);
    for &(a, b) in edges {
        dsu.union(a, b);
    }
    (0..n).map(|v| dsu.find(v)).collect()
}

/// Minimum spanning tree weight by enumerating every `(n-1)`-subset of edges.
/// Only usable for a handful of edges. Returns `None` if the graph is disconnected.
pub fn min_spanning_weight_by_enumeration(n: usize, edges: &[Edge]) -> Option<f64> {
    let m = edges.len();
    assert!(m <= 20, "enumeration oracle is exponential in the edge count");
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut dsu = Dsu::new(n);
        let mut ok = true;
        let mut w = 0.0;
        for (i, e) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                if !dsu.union(e.0, e.1) {
                    ok = false;
                    break;
                }
                w += e.2;
            }
        }
        if ok && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
    }
    best
}

/// One linkage-matrix row: `(child_a, child_b, distance, size)` with
/// `child_a < child_b`.
pub type LinkageRow = (usize, usize, f64, usize);

/// Sequential linkage matrix from spanning-tree edges. Edges are sorted by
/// `(weight, min id, max id)` and merged in that order; a map from component
/// representative to current node id tracks the renumbering.
pub fn linkage_from_tree(n: usize, tree: &[Edge]) -> Vec<LinkageRow> {
    let mut sorted = tree.to_vec();
    sorted.sort_by(|a, b| {
        a.2.partial_cmp(&b.2)
            .unwrap()
            .then(a.0.min(a.1).cmp(&b.0.min(b.1)))
            .then(a.0.max(a.1).cmp(&b.0.max(b.1)))
    });
    let mut dsu = Dsu::new(n);
    let mut node_of: HashMap<usize, (usize, usize)> = (0..n).map(|v| (v, (v, 1))).collect();
    let mut rows = Vec::with_capacity(n.saturating_sub(1));
    for (i, &(a, b, w)) in sorted.iter().enumerate() {
        let (ra, rb) = (dsu.find(a), dsu.find(b));
        assert_ne!(ra, rb, "tree edges must not close a cycle");
        let (na, sa) = node_of.remove(&ra).unwrap();
        let (nb, sb) = node_of.remove(&rb).unwrap();
        dsu.union(ra, rb);
        let root = dsu.find(ra);
        node_of.insert(root, (n + i, sa + sb));
        rows.push((na.min(nb), na.max(nb), w, sa + sb));
    }
    rows
}

/// Flat labels obtained by discarding the last `n_clusters - 1` merges and
/// labelling the remaining components. Labels are numbered by first
/// appearance in point order.
pub fn labels_from_truncated_merges(n: usize, rows: &[LinkageRow], n_clusters: usize) -> Vec<usize> {
    let keep = n - n_clusters;
    let mut dsu = Dsu::new(2 * n);
    for (i, r) in rows.iter().take(keep).enumerate() {
        dsu.union(r.0, n + i);
        dsu.union(r.1, n + i);
    }
    let mut ids = HashMap::new();
    (0..n)
        .map(|p| {
            let root = dsu.find(p);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect()
}

/// Single-linkage flat clustering straight from the definition: full
/// distance matrix, Kruskal over all `n(n-1)/2` pairs, drop the
/// `n_clusters - 1` heaviest tree edges, label components.
pub fn slink_labels(data: &[f64], dim: usize, n_clusters: usize) -> Vec<usize> {
    let n = data.len() / dim;
    let tree = complete_graph_mst(data, dim, true);
    let rows = linkage_from_tree(n, &tree.edges);
    labels_from_truncated_merges(n, &rows, n_clusters)
}

/// Kruskal over the complete graph of pairwise distances.
pub fn complete_graph_mst(data: &[f64], dim: usize, squared: bool) -> Forest {
    let n = data.len() / dim;
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = sq_dist(row(data, dim, i), row(data, dim, j));
            edges.push((i, j, if squared { d } else { d.sqrt() }));
        }
    }
    kruskal(n, &edges)
}

fn comb2(x: u64) -> f64 {
    (x * x.saturating_sub(1) / 2) as f64
}

/// Adjusted Rand index between two labelings of the same points.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| comb2(c)).sum();
    let sum_rows: f64 = rows.values().map(|&c| comb2(c)).sum();
    let sum_cols: f64 = cols.values().map(|&c| comb2(c)).sum();
    let expected = sum_rows * sum_cols / comb2(n);
    let max = 0.5 * (sum_rows + sum_cols);
    if max == expected {
        // both partitions trivial (all singletons or a single cluster)
        return if rows.len() == cols.len() { 1.0 } else { 0.0 };
    }
    (index - expected) / (max - expected)
}
