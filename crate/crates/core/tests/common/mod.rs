#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use slinkage::{edge_list_to_csr, CsrGraph, Edge, EdgeList, PointMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in the unit cube.
pub fn uniform_points(seed: u64, n: usize, d: usize) -> PointMatrix {
    let mut r = rng(seed);
    PointMatrix::new(n, d, (0..n * d).map(|_| r.random::<f64>()).collect()).unwrap()
}

/// Isotropic Gaussian blobs with centers drawn in `[-10, 10]^d`.
pub fn blobs(seed: u64, n: usize, d: usize, centers: usize, spread: f64) -> PointMatrix {
    let mut r = rng(seed);
    let c: Vec<f64> = (0..centers * d).map(|_| r.random_range(-10.0..10.0)).collect();
    let noise = Normal::new(0.0, spread).unwrap();
    let mut data = Vec::with_capacity(n * d);
    for i in 0..n {
        let k = i % centers;
        for j in 0..d {
            data.push(c[k * d + j] + noise.sample(&mut r));
        }
    }
    PointMatrix::new(n, d, data).unwrap()
}

/// Random connected graph: a random spanning tree plus extra random edges.
/// `distinct_weights` bounds the number of distinct integer weights used
/// (small values produce heavy ties); `None` draws continuous weights.
pub fn random_connected_graph(seed: u64, n: usize, m: usize, distinct_weights: Option<u32>) -> Vec<(usize, usize, f64)> {
    let mut r = rng(seed);
    let weight = |r: &mut ChaCha8Rng| match distinct_weights {
        Some(levels) => f64::from(r.random_range(1..=levels)),
        None => r.random_range(0.001..100.0),
    };
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = r.random_range(0..v);
        let w = weight(&mut r);
        edges.push((u, v, w));
    }
    while edges.len() < m {
        let a = r.random_range(0..n);
        let b = r.random_range(0..n);
        if a != b {
            let w = weight(&mut r);
            edges.push((a, b, w));
        }
    }
    edges
}

/// Disconnected graph made of `c` random connected blocks over `n` vertices.
pub fn random_forest_graph(seed: u64, n: usize, c: usize, extra: usize) -> (Vec<(usize, usize, f64)>, usize) {
    let mut r = rng(seed);
    // random block assignment with every block non-empty
    let mut block: Vec<usize> = (0..n).map(|v| if v < c { v } else { r.random_range(0..c) }).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        block.swap(i, j);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); c];
    for (v, &b) in block.iter().enumerate() {
        members[b].push(v);
    }
    let mut edges = Vec::new();
    for m in &members {
        for i in 1..m.len() {
            let j = r.random_range(0..i);
            edges.push((m[j], m[i], r.random_range(0.5..10.0)));
        }
        for _ in 0..extra {
            if m.len() > 1 {
                let a = m[r.random_range(0..m.len())];
                let b = m[r.random_range(0..m.len())];
                if a != b {
                    edges.push((a, b, r.random_range(0.5..10.0)));
                }
            }
        }
    }
    (edges, c)
}

pub fn to_csr(n: usize, edges: &[(usize, usize, f64)]) -> CsrGraph {
    let list = EdgeList::new(n, edges.iter().map(|&(a, b, w)| Edge::new(a, b, w)).collect()).unwrap();
    edge_list_to_csr(&list).unwrap()
}

pub fn tuples(list: &EdgeList) -> Vec<(usize, usize, f64)> {
    list.edges.iter().map(|e| (e.src, e.dst, e.weight)).collect()
}

pub fn relative_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Runs `f` inside a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}
