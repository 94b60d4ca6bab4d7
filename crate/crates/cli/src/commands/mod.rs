mod bench;
mod verify;

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::{ThreadPool, ThreadPoolBuilder};
use slinkage::{edge_list_to_csr, fused_knn, single_linkage_timed, solve_mst, LinkageConfig, Metric, TileSpec};
use slinkage_oracle as oracle;

pub use bench::bench;
pub use verify::{verify, CheckReport};

use crate::args::{ClusterArgs, KnnArgs, MatrixInput, MstArgs};
use crate::error::CliError;
use crate::formats::{self, read_matrix};
use crate::manifest::{RunManifest, RunParams};

pub const LABELS_FILE: &str = "labels.csv";
pub const DENDROGRAM_FILE: &str = "dendrogram.csv";
pub const INDICES_FILE: &str = "indices.csv";
pub const DISTANCES_FILE: &str = "distances.csv";
pub const MST_FILE: &str = "mst.csv";
pub const BENCH_FILE: &str = "bench.csv";

pub(crate) fn thread_pool(threads: Option<usize>) -> Result<ThreadPool, CliError> {
    let mut builder = ThreadPoolBuilder::new();
    match threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => builder = builder.num_threads(t),
        None => {}
    }
    builder.build().map_err(|e| CliError::Internal(format!("cannot start worker threads: {e}")))
}

pub(crate) fn output_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::OutputDir {
        path: dir.to_path_buf(),
        source,
    })
}

pub(crate) fn write_output(
    path: PathBuf,
    manifest: &mut RunManifest,
    f: impl FnOnce(BufWriter<File>) -> io::Result<()>,
) -> Result<(), CliError> {
    let result = File::create(&path).and_then(|file| f(BufWriter::new(file)));
    result.map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })?;
    manifest.outputs.push(path);
    Ok(())
}

pub(crate) fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn tile_spec(tile: Option<usize>) -> Result<TileSpec, CliError> {
    Ok(match tile {
        Some(t) => TileSpec::square(t)?,
        None => TileSpec::default(),
    })
}

fn matrix_params(m: &MatrixInput, pool: &ThreadPool, seed: u64, tile: TileSpec) -> RunParams {
    RunParams {
        k: Some(m.k),
        metric: Some(Metric::from(m.metric).name().to_string()),
        seed,
        threads: pool.current_num_threads(),
        tile: Some([tile.batch_m(), tile.batch_n()]),
        ..Default::default()
    }
}

pub fn cluster(a: &ClusterArgs) -> Result<RunManifest, CliError> {
    let pool = thread_pool(a.exec.threads)?;
    let tile = tile_spec(a.matrix.tile)?;
    let t = Instant::now();
    let x = read_matrix(&a.matrix.input)?;
    let read_ms = ms(t);

    let cfg = LinkageConfig {
        n_clusters: a.n_clusters,
        k: a.matrix.k,
        metric: a.matrix.metric.into(),
        seed: a.exec.seed,
        max_connect_iters: None,
        tile,
        allow_large_k: a.allow_large_k,
    };
    let run = pool.install(|| single_linkage_timed(&x, &cfg))?;

    let mut params = matrix_params(&a.matrix, &pool, a.exec.seed, tile);
    params.n_clusters = Some(a.n_clusters);
    let mut manifest = RunManifest::new("cluster", Some(&a.matrix.input), params);
    manifest.timing("read", read_ms);
    let s = run.timings;
    for (stage, v) in [
        ("knn", s.knn_ms),
        ("mst", s.mst_ms),
        ("connect", s.connect_ms),
        ("dendrogram", s.dendrogram_ms),
        ("extract", s.extract_ms),
    ] {
        manifest.timing(stage, v);
    }

    let t = Instant::now();
    let dir = &a.matrix.output_dir;
    output_dir(dir)?;
    write_output(dir.join(LABELS_FILE), &mut manifest, |w| formats::write_labels(w, run.labels.as_slice()))?;
    write_output(dir.join(DENDROGRAM_FILE), &mut manifest, |w| formats::write_dendrogram(w, &run.dendrogram))?;
    manifest.timing("write", ms(t));

    manifest.stat("n_points", x.n_rows());
    manifest.stat("n_features", x.n_cols());
    manifest.stat("knn_components", run.knn_components);
    manifest.stat("uncertified_edges", run.uncertified_edges);
    manifest.stat("connect_iterations", run.connect_iterations);
    println!(
        "clustered {} points into {} clusters (k-NN forest: {} components, {} reconnection rounds)",
        x.n_rows(),
        a.n_clusters,
        run.knn_components,
        run.connect_iterations
    );
    manifest.write(dir)
}

pub fn knn(a: &KnnArgs) -> Result<RunManifest, CliError> {
    let pool = thread_pool(a.exec.threads)?;
    let tile = tile_spec(a.matrix.tile)?;
    let t = Instant::now();
    let x = read_matrix(&a.matrix.input)?;
    let read_ms = ms(t);

    let t = Instant::now();
    let g = pool.install(|| fused_knn(&x, a.matrix.k, a.matrix.metric.into(), tile))?;
    let knn_ms = ms(t);

    let params = matrix_params(&a.matrix, &pool, a.exec.seed, tile);
    let mut manifest = RunManifest::new("knn", Some(&a.matrix.input), params);
    manifest.timing("read", read_ms);
    manifest.timing("knn", knn_ms);
    let t = Instant::now();
    let dir = &a.matrix.output_dir;
    output_dir(dir)?;
    let distances_path = dir.join(DISTANCES_FILE);
    let distances = File::create(&distances_path).map_err(|source| CliError::Write {
        path: distances_path.clone(),
        source,
    })?;
    write_output(dir.join(INDICES_FILE), &mut manifest, |w| {
        formats::write_knn(w, BufWriter::new(distances), &g)
    })?;
    manifest.outputs.push(distances_path);
    manifest.timing("write", ms(t));
    manifest.stat("n_points", x.n_rows());
    println!("wrote {} nearest neighbours for {} points", a.matrix.k, x.n_rows());
    manifest.write(dir)
}

pub fn mst(a: &MstArgs) -> Result<RunManifest, CliError> {
    let pool = thread_pool(a.exec.threads)?;
    let t = Instant::now();
    let bytes = fs::read(&a.input).map_err(|source| CliError::Read {
        path: a.input.clone(),
        source,
    })?;
    let graph = formats::parse_matrix_market(&bytes).map_err(|source| CliError::Parse {
        path: a.input.clone(),
        source,
    })?;
    let csr = edge_list_to_csr(&graph.edges)?;
    let read_ms = ms(t);

    let t = Instant::now();
    let result = pool.install(|| solve_mst(&csr, a.maximize, a.exec.seed))?;
    let mst_ms = ms(t);
    let total = result.edges.total_weight();

    let params = RunParams {
        seed: a.exec.seed,
        threads: pool.current_num_threads(),
        maximize: Some(a.maximize),
        ..Default::default()
    };
    let mut manifest = RunManifest::new("mst", Some(&a.input), params);
    manifest.timing("read", read_ms);
    manifest.timing("mst", mst_ms);
    manifest.stat("n_vertices", csr.n_vertices());
    manifest.stat("n_edges", csr.n_entries() / 2);
    manifest.stat("tree_edges", result.edges.len());
    manifest.stat("components", result.n_components);
    manifest.stat("total_weight", total);
    manifest.stat("iterations", result.iterations);

    let dir = &a.output_dir;
    output_dir(dir)?;
    let t = Instant::now();
    write_output(dir.join(MST_FILE), &mut manifest, |w| formats::write_mst(w, &result.edges))?;
    manifest.timing("write", ms(t));
    println!("edges: {}", result.edges.len());
    println!("components: {}", result.n_components);
    println!("total weight: {total}");

    if a.verify {
        let t = Instant::now();
        let sign = if a.maximize { -1.0 } else { 1.0 };
        let sym: Vec<oracle::Edge> = csr
            .to_edge_list()
            .edges
            .iter()
            .map(|e| (e.src, e.dst, sign * e.weight))
            .collect();
        let reference = oracle::kruskal(csr.n_vertices(), &sym);
        let expected = sign * reference.total_weight;
        manifest.timing("verify", ms(t));
        let weight_ok = (total - expected).abs() <= 1e-9 * total.abs().max(expected.abs()).max(f64::MIN_POSITIVE);
        let ok = weight_ok
            && reference.edges.len() == result.edges.len()
            && reference.n_components == result.n_components;
        manifest.stat("verified", ok);
        println!(
            "verify: kruskal weight {expected}, {} edges, {} components: {}",
            reference.edges.len(),
            reference.n_components,
            if ok { "ok" } else { "MISMATCH" }
        );
        if !ok {
            manifest.write(dir)?;
            return Err(CliError::Mismatch(format!(
                "solver weight {total} vs kruskal {expected}"
            )));
        }
    }
    manifest.write(dir)
}
