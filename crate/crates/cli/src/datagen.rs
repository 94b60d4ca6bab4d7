//! Seeded synthetic inputs for `verify`, `bench` and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use slinkage::PointMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian blobs around centers drawn uniformly from `[-10, 10]^d`.
/// Point `i` belongs to blob `i % centers`. Values are rounded to `f32`
/// so the matrix survives a trip through either file format unchanged.
pub fn blobs(seed: u64, n: usize, d: usize, centers: usize, spread: f64) -> PointMatrix {
    let mut r = rng(seed);
    let c: Vec<f64> = (0..centers * d).map(|_| r.random_range(-10.0..10.0)).collect();
    let noise = Normal::new(0.0, spread).expect("spread must be finite and non-negative");
    let values: Vec<f32> = (0..n * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            (c[(i % centers) * d + j] + noise.sample(&mut r)) as f32
        })
        .collect();
    PointMatrix::from_f32(n, d, &values).expect("generated values are finite")
}

/// Uniform points in the unit cube, rounded to `f32`.
pub fn uniform(seed: u64, n: usize, d: usize) -> PointMatrix {
    let mut r = rng(seed);
    let values: Vec<f32> = (0..n * d).map(|_| r.random::<f32>()).collect();
    PointMatrix::from_f32(n, d, &values).expect("generated values are finite")
}

/// Connected multigraph: a random spanning tree plus random extra edges, up
/// to `m` edges in total. With `levels`, weights are integers in
/// `1..=levels`; otherwise continuous in `(0, 100)`.
pub fn connected_graph(seed: u64, n: usize, m: usize, levels: Option<u32>) -> Vec<(usize, usize, f64)> {
    let mut r = rng(seed);
    let weight = move |r: &mut ChaCha8Rng| match levels {
        Some(l) => f64::from(r.random_range(1..=l)),
        None => r.random_range(1e-3..100.0),
    };
    let mut edges = Vec::with_capacity(m.max(n));
    for v in 1..n {
        let u = r.random_range(0..v);
        let w = weight(&mut r);
        edges.push((u, v, w));
    }
    while edges.len() < m && n > 1 {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b {
            let w = weight(&mut r);
            edges.push((a, b, w));
        }
    }
    edges
}

/// `c` vertex-disjoint connected blocks over `n` vertices, block sizes
/// random but non-empty.
pub fn disconnected_graph(seed: u64, n: usize, c: usize, extra_per_block: usize) -> Vec<(usize, usize, f64)> {
    assert!(c >= 1 && c <= n);
    let mut r = rng(seed);
    let mut block: Vec<usize> = (0..n).map(|v| if v < c { v } else { r.random_range(0..c) }).collect();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        block.swap(i, j);
    }
    let mut members = vec![Vec::new(); c];
    for (v, &b) in block.iter().enumerate() {
        members[b].push(v);
    }
    let mut edges = Vec::new();
    for m in members.iter().filter(|m| m.len() > 1) {
        for i in 1..m.len() {
            let j = r.random_range(0..i);
            edges.push((m[j], m[i], r.random_range(0.5..10.0)));
        }
        for _ in 0..extra_per_block {
            let (a, b) = (m[r.random_range(0..m.len())], m[r.random_range(0..m.len())]);
            if a != b {
                edges.push((a, b, r.random_range(0.5..10.0)));
            }
        }
    }
    edges
}

/// Tight groups of points, spaced so that each group's `k` nearest
/// neighbours stay inside it as long as `k < group_size`. Gaps between
/// consecutive groups grow so merge heights are distinct.
pub fn separated_groups(seed: u64, groups: usize, group_size: usize, d: usize) -> PointMatrix {
    let mut r = rng(seed);
    let mut values = Vec::with_capacity(groups * group_size * d);
    for g in 0..groups {
        let offset = 100.0 * g as f64 + (g * g) as f64;
        for _ in 0..group_size {
            for j in 0..d {
                let base = if j == 0 { offset } else { 0.0 };
                values.push((base + r.random_range(0.0..1.0)) as f32);
            }
        }
    }
    PointMatrix::from_f32(groups * group_size, d, &values).expect("generated values are finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_sized() {
        assert_eq!(blobs(1, 30, 3, 4, 0.5), blobs(1, 30, 3, 4, 0.5));
        assert_ne!(blobs(1, 30, 3, 4, 0.5), blobs(2, 30, 3, 4, 0.5));
        assert_eq!(uniform(3, 10, 2).n_rows(), 10);
        let g = connected_graph(4, 50, 200, Some(3));
        assert_eq!(g.len(), 200);
        assert!(g.iter().all(|e| e.0 != e.1 && (1.0..=3.0).contains(&e.2)));
        let f = disconnected_graph(5, 40, 6, 3);
        assert_eq!(slinkage_oracle::kruskal(40, &f).n_components, 6);
    }
}
