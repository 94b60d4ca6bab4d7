//! Parallel single-linkage hierarchical clustering.
//!
//! The pipeline has four stages:
//!
//! * [`neighbors::fused_knn`] builds an exact k-nearest-neighbour graph with
//!   selection fused into a tiled distance computation.
//! * [`mst::solve_mst`] computes a minimum spanning forest of that graph with
//!   a deterministic Borůvka variant.
//! * [`linkage::connect_graph`] bridges any remaining components with
//!   cross-component nearest neighbours and re-solves the tree.
//! * [`linkage::build_dendrogram`] and [`linkage::extract_clusters`] turn the
//!   tree into a linkage matrix and flat labels.
//!
//! [`linkage::single_linkage`] runs all of them.
//!
//! ```
//! use slinkage::{single_linkage, LinkageConfig, PointMatrix};
//!
//! let x = PointMatrix::new(4, 1, vec![0.0, 1.0, 10.0, 12.0]).unwrap();
//! let cfg = LinkageConfig { k: 1, ..LinkageConfig::with_clusters(2) };
//! let (dendrogram, labels) = single_linkage(&x, &cfg).unwrap();
//! assert_eq!(dendrogram.merges.len(), 3);
//! assert_eq!(labels.labels, vec![0, 0, 1, 1]);
//! ```
//!
//! All stages use the current rayon thread pool. Results do not depend on
//! the number of threads.

pub mod error;
pub mod graph;
pub mod linkage;
pub mod mst;
pub mod neighbors;
pub mod union_find;

pub use error::{Error, Result};
pub use graph::{
    canonical_edge_key, edge_list_to_csr, ColorArray, CsrGraph, Dendrogram, Edge, EdgeList, Merge,
    NeighborPair, PointMatrix, RowSlice,
};
pub use linkage::{
    build_dendrogram, compute_cut_level, connect_graph, extract_clusters, single_linkage,
    single_linkage_timed, forest_colors, LabelArray, LinkageConfig, LinkageRun, StageTimings,
};
pub use mst::{solve_mst, weight_alteration, AlteredGraph, MstResult};
pub use neighbors::{cross_color_1nn, fused_1nn, fused_knn, KnnGraph, Metric, TileSpec};
