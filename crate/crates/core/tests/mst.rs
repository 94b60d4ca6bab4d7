mod common;

use std::collections::HashSet;

use common::{random_connected_graph, random_forest_graph, relative_eq, to_csr, tuples, with_threads};
use slinkage::mst::{label_propagation, min_edge_per_supervertex, min_edge_per_vertex};
use slinkage::{edge_list_to_csr, solve_mst, weight_alteration, ColorArray, Edge, EdgeList, MstResult};
use slinkage_oracle as oracle;

fn assert_acyclic(r: &MstResult) {
    let mut dsu = oracle::Dsu::new(r.edges.n_vertices);
    for e in &r.edges.edges {
        assert!(dsu.union(e.src, e.dst), "edge ({}, {}) closes a cycle", e.src, e.dst);
    }
}

fn key_set(list: &EdgeList) -> HashSet<(usize, usize)> {
    list.edges.iter().map(|e| (e.src.min(e.dst), e.src.max(e.dst))).collect()
}

#[test]
fn matches_kruskal_on_random_graphs() {
    for seed in 0..30 {
        let n = 50 + (seed as usize * 37) % 400;
        let m = (n * 6).min(10_000);
        let levels = match seed % 3 {
            0 => None,
            1 => Some(5),
            _ => Some(1000),
        };
        let edges = random_connected_graph(seed, n, m, levels);
        let r = solve_mst(&to_csr(n, &edges), false, seed).unwrap();
        let k = oracle::kruskal(n, &edges);
        assert_eq!(r.edges.len(), n - 1);
        assert_eq!(r.n_components, 1);
        assert!(relative_eq(r.edges.total_weight(), k.total_weight, 1e-9), "seed {seed}");
        assert_acyclic(&r);
    }
}

#[test]
fn equal_weight_cycle() {
    let edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)];
    let best = oracle::min_spanning_weight_by_enumeration(4, &edges).unwrap();
    assert_eq!(best, 3.0);
    let g = to_csr(4, &edges);
    let reference = solve_mst(&g, false, 11).unwrap();
    assert_eq!(reference.edges.len(), 3);
    assert_eq!(reference.edges.total_weight(), best);
    assert_acyclic(&reference);
    for threads in [1, 2, 8] {
        assert_eq!(with_threads(threads, || solve_mst(&g, false, 11).unwrap()), reference);
    }
}

#[test]
fn small_graphs_match_enumeration() {
    for seed in 0..40 {
        let n = 4 + (seed as usize % 3);
        let edges = random_connected_graph(seed, n, 9, Some(3));
        let best = oracle::min_spanning_weight_by_enumeration(n, &edges).unwrap();
        let r = solve_mst(&to_csr(n, &edges), false, seed).unwrap();
        assert_eq!(r.edges.total_weight(), best, "seed {seed}");
    }
}

#[test]
fn forest_law_on_disconnected_graphs() {
    for seed in 0..20 {
        let c = 2 + seed as usize % 6;
        let n = 40 + seed as usize * 5;
        let (edges, c) = random_forest_graph(seed, n, c, 10);
        let r = solve_mst(&to_csr(n, &edges), false, seed).unwrap();
        assert_eq!(r.n_components, c);
        assert_eq!(r.edges.len(), n - c);
        assert_eq!(r.colors.n_unique(), c);
        assert!(r.colors.is_canonical());
        assert_acyclic(&r);
        let want = oracle::min_id_components(n, &edges.iter().map(|e| (e.0, e.1)).collect::<Vec<_>>());
        assert_eq!(r.colors.as_slice(), want.as_slice());
    }
}

#[test]
fn maximize_is_negated_minimize() {
    for seed in 0..10 {
        let n = 60;
        let edges = random_connected_graph(seed, n, 300, Some(50));
        // parallel edges collapse to their lightest copy before negation
        let g = to_csr(n, &edges);
        let max = solve_mst(&g, true, seed).unwrap();
        let min = solve_mst(&g.with_weights(g.weights().iter().map(|w| -w).collect()), false, seed).unwrap();
        assert_eq!(key_set(&max.edges), key_set(&min.edges));
        assert_eq!(max.edges.total_weight(), -min.edges.total_weight());
        let negated: Vec<_> = tuples(&g.to_edge_list()).iter().map(|&(a, b, w)| (a, b, -w)).collect();
        let k = oracle::kruskal(n, &negated);
        assert!(relative_eq(max.edges.total_weight(), -k.total_weight, 1e-9));
    }
}

#[test]
fn output_weights_are_original() {
    let edges = random_connected_graph(3, 80, 400, Some(7));
    let g = to_csr(80, &edges);
    let r = solve_mst(&g, false, 3).unwrap();
    for e in &r.edges.edges {
        assert!(e.src < e.dst);
        assert_eq!(e.weight, g.weights()[g.find_slot(e.src, e.dst).unwrap()]);
        assert_eq!(e.weight.fract(), 0.0);
    }
}

#[test]
fn alteration_properties_exhaustive() {
    for seed in 0..5 {
        let edges = random_connected_graph(seed, 60, 200, if seed % 2 == 0 { Some(4) } else { None });
        let a = weight_alteration(&to_csr(60, &edges), seed).unwrap();
        let ranked = a.edges_by_rank();
        for i in 0..ranked.len() {
            for j in 0..ranked.len() {
                if ranked[i].original < ranked[j].original {
                    assert!(ranked[i].altered <= ranked[j].altered);
                    assert!(i < j, "rank order must preserve original order");
                }
            }
            assert!(ranked[i].altered >= ranked[i].original);
            assert!(ranked[i].altered < ranked[i].original + a.theta());
        }
        assert!(a.graph().is_symmetric());
        let g = a.graph();
        for v in 0..g.n_vertices() {
            for slot in g.row_range(v) {
                let mirror = g.find_slot(g.col_indices()[slot], v).unwrap();
                assert_eq!(a.rank_of_slot(slot), a.rank_of_slot(mirror));
            }
        }
    }
}

#[test]
fn vertex_minima_match_linear_scan() {
    for seed in 0..10 {
        let n = 120;
        let edges = random_connected_graph(seed, n, 600, Some(20));
        let a = weight_alteration(&to_csr(n, &edges), seed).unwrap();
        let mut r = common::rng(seed + 100);
        let colors: Vec<usize> = (0..n).map(|_| rand::Rng::random_range(&mut r, 0..8)).collect();
        // canonical form: relabel by smallest member
        let mut first = vec![usize::MAX; 8];
        let colors: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| {
                if first[c] == usize::MAX {
                    first[c] = v;
                }
                first[c]
            })
            .collect();
        let colors = ColorArray::from_vec(colors);
        let m = min_edge_per_vertex(&a, &colors);
        let g = a.graph();
        let c = colors.as_slice();
        for v in 0..n {
            let mut best: Option<usize> = None;
            for slot in g.row_range(v) {
                if c[g.col_indices()[slot]] != c[v] {
                    let rank = a.rank_of_slot(slot);
                    best = Some(best.map_or(rank, |b| b.min(rank)));
                }
            }
            assert_eq!(m.per_vertex[v], best);
        }
        // per-color argmin and cut safety
        let accepted = min_edge_per_supervertex(&m, &colors);
        let mut expected = Vec::new();
        for color in 0..n {
            let crossing = a
                .edges_by_rank()
                .iter()
                .enumerate()
                .filter(|(_, e)| (c[e.src] == color) != (c[e.dst] == color))
                .map(|(r, _)| r)
                .min();
            if let Some(r) = crossing.filter(|_| c[color] == color) {
                expected.push(r);
            }
        }
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(accepted, expected);
    }
}

#[test]
fn propagation_matches_union_find() {
    for seed in 0..20 {
        let n = 200;
        let mut r = common::rng(seed);
        let mut base_edges = Vec::new();
        for _ in 0..60 {
            let a = rand::Rng::random_range(&mut r, 0..n);
            let b = rand::Rng::random_range(&mut r, 0..n);
            base_edges.push((a, b));
        }
        let before = ColorArray::from_vec(oracle::min_id_components(n, &base_edges));
        let mut batch = Vec::new();
        for _ in 0..40 {
            let a = rand::Rng::random_range(&mut r, 0..n);
            let b = rand::Rng::random_range(&mut r, 0..n);
            if before.get(a) != before.get(b) {
                batch.push((a, b));
            }
        }
        let after = label_propagation(&batch, &before);
        let all: Vec<_> = base_edges.iter().chain(&batch).copied().collect();
        assert_eq!(after.as_slice(), oracle::min_id_components(n, &all).as_slice());
    }
}

#[test]
fn deterministic_across_threads() {
    let edges = random_connected_graph(21, 400, 4000, Some(30));
    let g = to_csr(400, &edges);
    let reference = with_threads(1, || solve_mst(&g, false, 5).unwrap());
    for threads in [2, 8] {
        assert_eq!(with_threads(threads, || solve_mst(&g, false, 5).unwrap()), reference);
    }
}

#[test]
fn csr_is_independent_of_edge_order() {
    // every ordering of a small multigraph gives the same CSR
    let base = vec![Edge::new(0, 1, 2.0), Edge::new(1, 0, 2.0), Edge::new(1, 2, 1.0), Edge::new(2, 1, 3.0)];
    let reference = edge_list_to_csr(&EdgeList::new(3, base.clone()).unwrap()).unwrap();
    let mut perm = base.clone();
    let mut seen = 0;
    permutations(&mut perm, 0, &mut |p| {
        seen += 1;
        assert_eq!(edge_list_to_csr(&EdgeList::new(3, p.to_vec()).unwrap()).unwrap(), reference);
    });
    assert_eq!(seen, 24);
    assert_eq!(tuples(&reference.to_edge_list()), vec![(0, 1, 2.0), (1, 2, 1.0)]);
}

fn permutations(v: &mut Vec<Edge>, k: usize, f: &mut impl FnMut(&[Edge])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}
