use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slinkage::Metric;

/// Environment variable read when `--threads` is not given.
pub const THREADS_ENV: &str = "SLINKAGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "slinkage", version, about = "Parallel single-linkage hierarchical clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster the rows of a matrix and write labels, dendrogram and manifest.
    Cluster(ClusterArgs),
    /// Write the k nearest neighbours of every row.
    Knn(KnnArgs),
    /// Minimum (or maximum) spanning forest of a Matrix Market graph.
    Mst(MstArgs),
    /// Check the library against brute-force oracles on seeded random inputs.
    Verify(VerifyArgs),
    /// Time every pipeline stage over a sweep of sizes and thread counts.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Sqeuclidean,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Sqeuclidean => Metric::SqEuclidean,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Exec {
    /// Seed for weight alteration and generated data.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all available).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct MatrixInput {
    /// CSV or SLNK binary matrix, one point per row.
    #[arg(short, long)]
    pub input: PathBuf,

    #[arg(short, long, default_value = ".")]
    pub output_dir: PathBuf,

    #[arg(long, value_enum, default_value_t = MetricArg::Sqeuclidean)]
    pub metric: MetricArg,

    /// Neighbours per point.
    #[arg(short, long, default_value_t = 15)]
    pub k: usize,

    /// Square tile edge for the distance kernel (default 64 x 256).
    #[arg(long)]
    pub tile: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub matrix: MatrixInput,

    #[arg(short = 'c', long, default_value_t = 2)]
    pub n_clusters: usize,

    /// Accept k above 64.
    #[arg(long)]
    pub allow_large_k: bool,

    #[command(flatten)]
    pub exec: Exec,
}

#[derive(Debug, Clone, Args)]
pub struct KnnArgs {
    #[command(flatten)]
    pub matrix: MatrixInput,

    #[command(flatten)]
    pub exec: Exec,
}

#[derive(Debug, Clone, Args)]
pub struct MstArgs {
    /// Matrix Market coordinate file.
    #[arg(short, long)]
    pub input: PathBuf,

    #[arg(short, long, default_value = ".")]
    pub output_dir: PathBuf,

    /// Maximum instead of minimum spanning forest.
    #[arg(long)]
    pub maximize: bool,

    /// Cross-check the result against Kruskal's algorithm.
    #[arg(long)]
    pub verify: bool,

    #[command(flatten)]
    pub exec: Exec,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Random instances per check.
    #[arg(long, default_value_t = 10)]
    pub cases: usize,

    /// Largest generated point count.
    #[arg(long, default_value_t = 400)]
    pub max_n: usize,

    #[command(flatten)]
    pub exec: Exec,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Point counts.
    #[arg(long, value_delimiter = ',', default_value = "2000,8000")]
    pub n: Vec<usize>,

    /// Dimensions.
    #[arg(short, long, value_delimiter = ',', default_value = "2,16")]
    pub d: Vec<usize>,

    #[arg(short, long, value_delimiter = ',', default_value = "15")]
    pub k: Vec<usize>,

    /// Thread counts (default: all available).
    #[arg(long, value_delimiter = ',', env = THREADS_ENV)]
    pub threads: Vec<usize>,

    #[arg(short = 'c', long, default_value_t = 8)]
    pub n_clusters: usize,

    #[arg(long, default_value_t = 1)]
    pub repeat: usize,

    #[arg(long, value_enum, default_value_t = MetricArg::Sqeuclidean)]
    pub metric: MetricArg,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write bench.csv and a manifest here instead of printing to stdout.
    #[arg(short, long)]
    pub output_dir: Option<PathBuf>,
}
