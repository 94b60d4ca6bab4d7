use slinkage::{
    edge_list_to_csr, fused_knn, single_linkage, solve_mst, Edge, EdgeList, LinkageConfig, Metric, TileSpec,
};
use slinkage_oracle as oracle;

use super::thread_pool;
use crate::args::VerifyArgs;
use crate::datagen;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            cases: 0,
            passed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.cases += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(e) => {
                self.first_failure.get_or_insert(e);
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn check_knn(seed: u64, max_n: usize) -> Result<(), String> {
    let n = 20 + seed as usize * 37 % max_n.saturating_sub(20).max(1);
    let d = [2, 8, 16][seed as usize % 3];
    let k = 1 + (seed as usize * 7) % 32.min(n - 1);
    let metric = if seed % 2 == 0 { Metric::SqEuclidean } else { Metric::Euclidean };
    let x = datagen::uniform(seed, n, d);
    let tile = TileSpec::square(1 + seed as usize % 64).map_err(|e| e.to_string())?;
    let g = fused_knn(&x, k, metric, tile).map_err(|e| e.to_string())?;
    let want = oracle::knn_by_sort(x.as_slice(), d, k, metric == Metric::SqEuclidean);
    for (i, row) in want.iter().enumerate() {
        let mut a: Vec<usize> = row.iter().map(|p| p.0).collect();
        let mut b = g.row_indices(i).to_vec();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(format!("seed {seed}: row {i} neighbour set differs"));
        }
        for (got, w) in g.row_distances(i).iter().zip(row) {
            if !close(*got, w.1, 1e-6) && (got - w.1).abs() > 1e-12 {
                return Err(format!("seed {seed}: row {i} distance {got} vs {}", w.1));
            }
        }
    }
    Ok(())
}

fn check_mst(seed: u64, max_n: usize) -> Result<(), String> {
    let n = 2 + seed as usize * 53 % max_n.max(3);
    let levels = [None, Some(3), Some(1)][seed as usize % 3];
    let raw = datagen::connected_graph(seed, n, 4 * n, levels);
    let list = EdgeList::new(n, raw.iter().map(|&(a, b, w)| Edge::new(a, b, w)).collect()).map_err(|e| e.to_string())?;
    let r = solve_mst(&edge_list_to_csr(&list).map_err(|e| e.to_string())?, false, seed).map_err(|e| e.to_string())?;
    let k = oracle::kruskal(n, &raw);
    if r.edges.len() != n - 1 || r.n_components != 1 {
        return Err(format!("seed {seed}: {} edges, {} components", r.edges.len(), r.n_components));
    }
    if !close(r.edges.total_weight(), k.total_weight, 1e-9) {
        return Err(format!("seed {seed}: weight {} vs kruskal {}", r.edges.total_weight(), k.total_weight));
    }
    Ok(())
}

fn check_slink(seed: u64, max_n: usize) -> Result<(), String> {
    let n = 10 + seed as usize * 71 % max_n.saturating_sub(10).max(1);
    let d = [2, 5, 12][seed as usize % 3];
    let c = [2, 5, 10][seed as usize % 3].min(n);
    let k = [3, 10][seed as usize % 2].min(n - 1);
    let x = datagen::blobs(seed, n, d, 6, 1.0);
    let cfg = LinkageConfig {
        k,
        seed,
        ..LinkageConfig::with_clusters(c)
    };
    let (_, labels) = single_linkage(&x, &cfg).map_err(|e| e.to_string())?;
    let want = oracle::slink_labels(x.as_slice(), d, c);
    let ari = oracle::adjusted_rand_index(&labels.labels, &want);
    if ari != 1.0 {
        return Err(format!("seed {seed}: adjusted Rand index {ari}"));
    }
    Ok(())
}

/// Runs the seeded oracle checks and returns one report per check.
pub fn run_checks(cases: usize, max_n: usize, seed: u64) -> Vec<CheckReport> {
    let checks: [(&'static str, fn(u64, usize) -> Result<(), String>); 3] =
        [("knn", check_knn), ("mst", check_mst), ("slink", check_slink)];
    checks
        .iter()
        .map(|&(name, check)| {
            let mut report = CheckReport::new(name);
            for i in 0..cases as u64 {
                report.record(check(seed.wrapping_add(i), max_n));
            }
            report
        })
        .collect()
}

pub fn verify(a: &VerifyArgs) -> Result<Vec<CheckReport>, CliError> {
    if a.max_n < 20 {
        return Err(CliError::Usage("--max-n must be at least 20".into()));
    }
    let pool = thread_pool(a.exec.threads)?;
    let reports = pool.install(|| run_checks(a.cases, a.max_n, a.exec.seed));
    println!("{:<8} {:>6} {:>6}  status", "check", "cases", "passed");
    for r in &reports {
        println!(
            "{:<8} {:>6} {:>6}  {}",
            r.name,
            r.cases,
            r.passed,
            if r.ok() { "ok" } else { "FAIL" }
        );
        if let Some(f) = &r.first_failure {
            println!("    first failure: {f}");
        }
    }
    match reports.iter().find(|r| !r.ok()) {
        Some(r) => Err(CliError::Mismatch(format!("{} check failed", r.name))),
        None => Ok(reports),
    }
}
