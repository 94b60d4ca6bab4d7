use std::io::{self, Write};
use std::time::Instant;

use slinkage::{single_linkage_timed, LinkageConfig, Metric};

use super::{ms, output_dir, thread_pool, write_output, BENCH_FILE};
use crate::args::BenchArgs;
use crate::datagen;
use crate::error::CliError;
use crate::manifest::{RunManifest, RunParams};

pub const BENCH_HEADER: &str = "n,d,k,threads,rep,knn_ms,mst_ms,connect_ms,dendrogram_ms,extract_ms,total_ms";

/// Runs the sweep and returns the CSV body, header included.
fn sweep(a: &BenchArgs) -> Result<String, CliError> {
    let threads = if a.threads.is_empty() {
        vec![thread_pool(None)?.current_num_threads()]
    } else {
        a.threads.clone()
    };
    let mut out = String::from(BENCH_HEADER);
    out.push('\n');
    for &n in &a.n {
        for &d in &a.d {
            let x = datagen::blobs(a.seed, n, d, a.n_clusters.max(2), 1.0);
            for &k in &a.k {
                let cfg = LinkageConfig {
                    k,
                    metric: Metric::from(a.metric),
                    seed: a.seed,
                    allow_large_k: true,
                    ..LinkageConfig::with_clusters(a.n_clusters)
                };
                for &t in &threads {
                    let pool = thread_pool(Some(t))?;
                    for rep in 0..a.repeat {
                        let start = Instant::now();
                        let run = pool.install(|| single_linkage_timed(&x, &cfg))?;
                        let total = ms(start);
                        let s = run.timings;
                        out.push_str(&format!(
                            "{n},{d},{k},{t},{rep},{:.3},{:.3},{:.3},{:.3},{:.3},{total:.3}\n",
                            s.knn_ms, s.mst_ms, s.connect_ms, s.dendrogram_ms, s.extract_ms
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn bench(a: &BenchArgs) -> Result<Option<RunManifest>, CliError> {
    if a.n.is_empty() || a.d.is_empty() || a.k.is_empty() {
        return Err(CliError::Usage("--n, --d and --k need at least one value".into()));
    }
    if a.repeat == 0 {
        return Err(CliError::Usage("--repeat must be at least 1".into()));
    }
    let t = Instant::now();
    let csv = sweep(a)?;
    let Some(dir) = &a.output_dir else {
        print!("{csv}");
        io::stdout().flush().map_err(|e| CliError::Internal(e.to_string()))?;
        return Ok(None);
    };
    let params = RunParams {
        n_clusters: Some(a.n_clusters),
        metric: Some(Metric::from(a.metric).name().to_string()),
        seed: a.seed,
        threads: a.threads.iter().copied().max().unwrap_or(0),
        ..Default::default()
    };
    let mut manifest = RunManifest::new("bench", None, params);
    manifest.timing("sweep", ms(t));
    output_dir(dir)?;
    write_output(dir.join(BENCH_FILE), &mut manifest, |mut w| {
        w.write_all(csv.as_bytes())?;
        w.flush()
    })?;
    manifest.write(dir).map(Some)
}
