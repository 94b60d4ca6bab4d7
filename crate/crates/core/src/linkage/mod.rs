//! End-to-end single-linkage clustering: k-NN graph, spanning forest,
//! reconnection of a disconnected forest, dendrogram and flat labels.

mod connect;
mod dendrogram;
mod flatten;

use std::time::Instant;

pub use connect::{certified_subforest, connect_graph, connect_graph_with, min_cross_color_edges, refine_edge_weights};
pub use dendrogram::build_dendrogram;
pub use flatten::{compute_cut_level, extract_clusters, inherit_labels, label_roots, LabelArray};

use crate::error::{Error, Result};
use crate::graph::{edge_list_to_csr, ColorArray, Dendrogram, EdgeList, PointMatrix};
use crate::mst::solve_distance_forest;
use crate::neighbors::{fused_knn, Metric, TileSpec};
use crate::union_find::DisjointSet;

/// Upper bound on `k` unless [`LinkageConfig::allow_large_k`] is set.
pub const DEFAULT_MAX_K: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageConfig {
    pub n_clusters: usize,
    /// Neighbours per point in the connectivity graph.
    pub k: usize,
    pub metric: Metric,
    /// Seed of the spanning-tree weight alteration.
    pub seed: u64,
    /// Cap on reconnection rounds; `None` means `ceil(log2 N) + 8`.
    pub max_connect_iters: Option<usize>,
    pub tile: TileSpec,
    pub allow_large_k: bool,
}

impl Default for LinkageConfig {
    fn default() -> Self {
        LinkageConfig {
            n_clusters: 2,
            k: 15,
            metric: Metric::SqEuclidean,
            seed: 0,
            max_connect_iters: None,
            tile: TileSpec::default(),
            allow_large_k: false,
        }
    }
}

impl LinkageConfig {
    pub fn with_clusters(n_clusters: usize) -> Self {
        LinkageConfig {
            n_clusters,
            ..Default::default()
        }
    }

    /// Checks the configuration against a data set of `n_points` points.
    pub fn validate(&self, n_points: usize) -> Result<()> {
        if n_points < 2 {
            return Err(Error::TooFewPoints { n: n_points });
        }
        if self.n_clusters == 0 || self.n_clusters > n_points {
            return Err(Error::InvalidClusterCount {
                n_clusters: self.n_clusters,
                n_points,
            });
        }
        let cap = if self.allow_large_k {
            n_points - 1
        } else {
            DEFAULT_MAX_K.min(n_points - 1)
        };
        if self.k == 0 || self.k > cap {
            return Err(Error::InvalidK {
                k: self.k,
                n_rows: n_points,
                max: cap,
            });
        }
        Ok(())
    }

    pub fn connect_iteration_cap(&self, n_points: usize) -> usize {
        self.max_connect_iters
            .unwrap_or_else(|| (n_points.max(2) as f64).log2().ceil() as usize + 8)
    }
}

/// Wall-clock time spent in each pipeline stage, in milliseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub knn_ms: f64,
    pub mst_ms: f64,
    pub connect_ms: f64,
    pub dendrogram_ms: f64,
    pub extract_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkageRun {
    pub dendrogram: Dendrogram,
    pub labels: LabelArray,
    pub timings: StageTimings,
    /// Components of the k-NN spanning forest.
    pub knn_components: usize,
    /// k-NN forest edges that could not be certified and were left to
    /// reconnection.
    pub uncertified_edges: usize,
    pub connect_iterations: usize,
}

/// Canonical coloring (smallest vertex id per component) of a forest.
pub fn forest_colors(forest: &EdgeList) -> ColorArray {
    let n = forest.n_vertices;
    let mut sets = DisjointSet::new(n);
    for e in &forest.edges {
        sets.union(e.src, e.dst);
    }
    let mut color_of_root = vec![usize::MAX; n];
    let colors = (0..n)
        .map(|v| {
            let r = sets.find(v);
            if color_of_root[r] == usize::MAX {
                color_of_root[r] = v;
            }
            color_of_root[r]
        })
        .collect();
    ColorArray::from_vec(colors)
}

/// Single-linkage clustering of the rows of `x`.
pub fn single_linkage(x: &PointMatrix, cfg: &LinkageConfig) -> Result<(Dendrogram, LabelArray)> {
    single_linkage_timed(x, cfg).map(|run| (run.dendrogram, run.labels))
}

/// [`single_linkage`] plus per-stage timings and reconnection statistics.
pub fn single_linkage_timed(x: &PointMatrix, cfg: &LinkageConfig) -> Result<LinkageRun> {
    let n = x.n_rows();
    cfg.validate(n)?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let knn = fused_knn(x, cfg.k, cfg.metric, cfg.tile)?;
    timings.knn_ms = elapsed_ms(t);

    let t = Instant::now();
    let forest = solve_distance_forest(&edge_list_to_csr(&knn.to_edge_list())?, cfg.seed)?;
    timings.mst_ms = elapsed_ms(t);
    let knn_components = forest.n_components;

    let t = Instant::now();
    let radius: Vec<f64> = (0..n).map(|i| knn.row_distances(i)[knn.k() - 1]).collect();
    let certified = certified_subforest(&forest.edges, &radius);
    let uncertified_edges = forest.edges.len() - certified.len();
    let colors = forest_colors(&certified);
    let (tree, connect_iterations) = if colors.n_unique() > 1 {
        connect_graph_with(x, &certified, &colors, cfg, Some(&knn))?
    } else {
        (refine_edge_weights(x, &certified, cfg.metric), 0)
    };
    timings.connect_ms = elapsed_ms(t);

    let t = Instant::now();
    let dendrogram = build_dendrogram(&tree, n)?;
    timings.dendrogram_ms = elapsed_ms(t);

    let t = Instant::now();
    let labels = extract_clusters(&dendrogram, cfg.n_clusters)?;
    timings.extract_ms = elapsed_ms(t);

    Ok(LinkageRun {
        dendrogram,
        labels,
        timings,
        knn_components,
        uncertified_edges,
        connect_iterations,
    })
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}
