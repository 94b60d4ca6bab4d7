use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use slinkage_cli::datagen;
use slinkage_cli::formats::encode_binary_matrix;
use slinkage_cli::RunManifest;
use tempfile::TempDir;

fn slinkage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slinkage"))
        .args(args)
        .env_remove("SLINKAGE_THREADS")
        .output()
        .unwrap()
}

fn status(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> String {
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

fn csv_of(x: &slinkage::PointMatrix) -> String {
    let mut s = String::new();
    for i in 0..x.n_rows() {
        let row: Vec<String> = x.row(i).iter().map(|v| (*v as f32).to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[test]
fn cluster_two_pairs() {
    let tmp = TempDir::new().unwrap();
    let input = write(tmp.path(), "pairs.csv", "0,0\n0,1\n10,0\n10,1\n");
    let out = tmp.path().join("out");
    let o = slinkage(&["cluster", "-i", &input, "-o", out.to_str().unwrap(), "-k", "1", "--n-clusters", "2"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let labels = lines(&out.join("labels.csv"));
    assert_eq!(labels.len(), 4);
    assert_eq!(labels[0], labels[1]);
    assert_eq!(labels[2], labels[3]);
    assert_ne!(labels[0], labels[2]);
    let dendrogram = lines(&out.join("dendrogram.csv"));
    assert_eq!(dendrogram.len(), 3);
    assert_eq!(dendrogram[2].split(',').count(), 4);
    assert!(dendrogram[2].ends_with(",4"));

    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.subcommand, "cluster");
    assert_eq!(m.params.n_clusters, Some(2));
    assert_eq!(m.params.k, Some(1));
    assert_eq!(m.params.metric.as_deref(), Some("sqeuclidean"));
    for f in ["labels.csv", "dendrogram.csv", "manifest.json"] {
        assert!(m.outputs.contains(&out.join(f)), "{f} missing from manifest");
    }
    assert!(m.outputs.iter().all(|p| p.exists()));
    for stage in ["read", "knn", "mst", "connect", "dendrogram", "extract", "write"] {
        assert!(m.timings_ms[stage] >= 0.0, "{stage}");
    }
}

#[test]
fn cluster_every_point_separate() {
    let tmp = TempDir::new().unwrap();
    let input = write(tmp.path(), "line.csv", "0\n1\n3\n7\n15\n");
    let o = slinkage(&["cluster", "-i", &input, "-o", tmp.path().to_str().unwrap(), "-k", "2", "-c", "5"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let mut labels = lines(&tmp.path().join("labels.csv"));
    labels.sort();
    labels.dedup();
    assert_eq!(labels.len(), 5);
}

#[test]
fn cluster_blobs_with_defaults() {
    let tmp = TempDir::new().unwrap();
    let x = datagen::blobs(3, 600, 4, 5, 0.5);
    let input = write(tmp.path(), "blobs.csv", csv_of(&x));
    let o = slinkage(&["cluster", "-i", &input, "-o", tmp.path().to_str().unwrap()]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    assert_eq!(lines(&tmp.path().join("dendrogram.csv")).len(), 599);
    assert_eq!(lines(&tmp.path().join("labels.csv")).len(), 600);
}

#[test]
fn csv_and_binary_give_identical_files() {
    let tmp = TempDir::new().unwrap();
    let x = datagen::blobs(8, 300, 3, 4, 1.0);
    let csv = write(tmp.path(), "x.csv", csv_of(&x));
    let values: Vec<f32> = x.as_slice().iter().map(|&v| v as f32).collect();
    let bin = write(tmp.path(), "x.bin", encode_binary_matrix(300, 3, &values));
    for (input, dir) in [(&csv, "a"), (&bin, "b")] {
        let out = tmp.path().join(dir);
        let o = slinkage(&["cluster", "-i", input, "-o", out.to_str().unwrap(), "-c", "4", "--metric", "euclidean"]);
        assert_eq!(status(&o), 0, "{}", stderr(&o));
    }
    for f in ["labels.csv", "dendrogram.csv"] {
        assert_eq!(fs::read(tmp.path().join("a").join(f)).unwrap(), fs::read(tmp.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn input_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let ragged = write(tmp.path(), "ragged.csv", "1,2\n3,4\n5\n");
    let o = slinkage(&["cluster", "-i", &ragged, "-o", dir]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let truncated = write(tmp.path(), "short.bin", &encode_binary_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0])[..20]);
    let o = slinkage(&["knn", "-i", &truncated, "-o", dir]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("byte offset"), "{}", stderr(&o));

    let ok = write(tmp.path(), "ok.csv", "0\n1\n2\n");
    for args in [
        vec!["cluster", "-i", &ok, "-o", dir, "-c", "4"],
        vec!["cluster", "-i", &ok, "-o", dir, "-k", "3"],
        vec!["cluster", "-i", &ok, "-o", dir, "--tile", "0"],
        vec!["cluster", "-i", &ok, "-o", dir, "--threads", "0"],
        vec!["cluster", "-i", &ok, "-o", dir, "--metric", "cosine"],
        vec!["cluster", "-i", "/nonexistent/x.csv", "-o", dir],
        vec!["cluster", "--bogus"],
        vec!["frobnicate"],
    ] {
        assert_eq!(status(&slinkage(&args)), 2, "{args:?}");
    }
}

#[test]
fn knn_outputs() {
    let tmp = TempDir::new().unwrap();
    let x = datagen::uniform(5, 120, 3);
    let input = write(tmp.path(), "x.csv", csv_of(&x));
    let o = slinkage(&["knn", "-i", &input, "-o", tmp.path().to_str().unwrap(), "-k", "6", "--metric", "euclidean"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let idx = lines(&tmp.path().join("indices.csv"));
    let dist = lines(&tmp.path().join("distances.csv"));
    assert_eq!((idx.len(), dist.len()), (120, 120));
    for (i, (ir, dr)) in idx.iter().zip(&dist).enumerate() {
        let ids: Vec<usize> = ir.split(',').map(|v| v.parse().unwrap()).collect();
        let ds: Vec<f64> = dr.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!((ids.len(), ds.len()), (6, 6));
        assert!(!ids.contains(&i));
        assert!(ds.windows(2).all(|w| w[0] <= w[1]));
    }
    let m = RunManifest::read(&tmp.path().join("manifest.json")).unwrap();
    assert!(m.outputs.contains(&tmp.path().join("distances.csv")));
}

const TRIANGLE: &str = "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n2 1 1\n3 1 3\n3 2 2\n";

#[test]
fn mst_triangle() {
    let tmp = TempDir::new().unwrap();
    let input = write(tmp.path(), "tri.mtx", TRIANGLE);
    let o = slinkage(&["mst", "-i", &input, "-o", tmp.path().to_str().unwrap(), "--verify"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("components: 1"));
    assert!(stdout.contains("total weight: 3"));
    assert!(stdout.contains(": ok"));
    assert_eq!(lines(&tmp.path().join("mst.csv")), vec!["0,1,1", "1,2,2"]);

    let o = slinkage(&["mst", "-i", &input, "-o", tmp.path().to_str().unwrap(), "--maximize", "--verify"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    assert_eq!(lines(&tmp.path().join("mst.csv")), vec!["0,2,3", "1,2,2"]);
    let m = RunManifest::read(&tmp.path().join("manifest.json")).unwrap();
    assert_eq!(m.params.maximize, Some(true));
    assert_eq!(m.stats["total_weight"], 5.0);
}

#[test]
fn mst_forest_and_general_symmetrization() {
    let tmp = TempDir::new().unwrap();
    // two components {1,2,3} and {4,5}, vertex 6 isolated; (1,2) listed both ways
    let text = "%%MatrixMarket matrix coordinate real general\n% comment\n6 6 5\n1 2 4.0\n2 1 1.5\n2 3 2\n4 5 7\n5 5 9\n";
    let input = write(tmp.path(), "forest.mtx", text);
    let o = slinkage(&["mst", "-i", &input, "-o", tmp.path().to_str().unwrap(), "--verify"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("edges: 3"), "{stdout}");
    assert!(stdout.contains("components: 3"), "{stdout}");
    assert_eq!(lines(&tmp.path().join("mst.csv")), vec!["0,1,1.5", "1,2,2", "3,4,7"]);
}

#[test]
fn mst_rejects_zero_weight() {
    let tmp = TempDir::new().unwrap();
    let input = write(tmp.path(), "z.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 0.0\n");
    let o = slinkage(&["mst", "-i", &input, "-o", tmp.path().to_str().unwrap()]);
    assert_eq!(status(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let bad = write(tmp.path(), "bad.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1\n");
    assert_eq!(status(&slinkage(&["mst", "-i", &bad, "-o", tmp.path().to_str().unwrap()])), 2);
}

#[test]
fn threads_flag_overrides_environment() {
    let tmp = TempDir::new().unwrap();
    let input = write(tmp.path(), "x.csv", "0\n1\n5\n6\n");
    let dir = tmp.path().to_str().unwrap();
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_slinkage"));
        c.args(["cluster", "-i", &input, "-o", dir, "-k", "1"]).args(extra);
        match env {
            Some(v) => c.env("SLINKAGE_THREADS", v),
            None => c.env_remove("SLINKAGE_THREADS"),
        };
        let o = c.output().unwrap();
        assert_eq!(status(&o), 0, "{}", stderr(&o));
        RunManifest::read(&tmp.path().join("manifest.json")).unwrap().params.threads
    };
    assert_eq!(run(&[], Some("3")), 3);
    assert_eq!(run(&["--threads", "2"], Some("3")), 2);
    assert_eq!(run(&["--threads", "5"], None), 5);
}

#[test]
fn verify_prints_table() {
    let o = slinkage(&["verify", "--cases", "4", "--max-n", "120", "--seed", "9"]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let stdout = String::from_utf8(o.stdout).unwrap();
    for check in ["knn", "mst", "slink"] {
        assert!(stdout.lines().any(|l| l.starts_with(check) && l.ends_with("ok")), "{stdout}");
    }
    assert_eq!(status(&slinkage(&["verify", "--max-n", "5"])), 2);
}

#[test]
fn bench_writes_csv() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("bench");
    let o = slinkage(&[
        "bench", "--n", "200,300", "-d", "2", "-k", "5,10", "--threads", "1,2", "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(status(&o), 0, "{}", stderr(&o));
    let rows = lines(&out.join("bench.csv"));
    assert_eq!(rows[0], "n,d,k,threads,rep,knn_ms,mst_ms,connect_ms,dendrogram_ms,extract_ms,total_ms");
    assert_eq!(rows.len(), 1 + 2 * 2 * 2);
    for r in &rows[1..] {
        let f: Vec<f64> = r.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(f.len(), 11);
        assert!(f[5..].iter().all(|&t| t >= 0.0));
    }
    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.subcommand, "bench");
}
