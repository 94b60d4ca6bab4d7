use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("data length {found} does not match {rows} rows x {cols} columns")]
    DataLength { rows: usize, cols: usize, found: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("k = {k} out of range for {n_rows} rows (need 1 <= k <= {max})")]
    InvalidK { k: usize, n_rows: usize, max: usize },

    #[error("tile sizes must be at least 1 (got {batch_m} x {batch_n})")]
    InvalidTile { batch_m: usize, batch_n: usize },

    #[error("query row {query} has no admissible candidate")]
    NoAdmissibleCandidate { query: usize },

    #[error("all points already share one color; nothing to connect")]
    AlreadyConnected,

    #[error("edge ({src}, {dst}) has zero weight, which weight alteration cannot support")]
    ZeroWeight { src: usize, dst: usize },

    #[error("edge ({src}, {dst}) has a non-finite weight")]
    NonFiniteWeight { src: usize, dst: usize },

    #[error("entry ({src}, {dst}) has no mirror entry; graph is not symmetric")]
    AsymmetricGraph { src: usize, dst: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("need at least 2 points, got {n}")]
    TooFewPoints { n: usize },

    #[error("n_clusters = {n_clusters} out of range for {n_points} points")]
    InvalidClusterCount { n_clusters: usize, n_points: usize },

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error(
        "graph still has {components} components after {iterations} reconnection rounds \
         (largest component: {largest} vertices)"
    )]
    ConnectDidNotConverge {
        iterations: usize,
        components: usize,
        largest: usize,
    },
}
