//! Order-preserving weight perturbation.
//!
//! Every undirected edge gets `w + eps` with `eps` in `[0, theta)`, where
//! `theta` is the smallest positive gap between distinct weights. Edges that
//! tied before become (almost surely) distinct, and an edge that was strictly
//! lighter than another stays strictly lighter. The perturbation is a hash of
//! the canonical edge key and the seed, so it does not depend on traversal
//! order.
//!
//! Floating-point addition can still round two perturbed values onto the same
//! number. The solver therefore orders edges by
//! `(altered, original, min id, max id)` and works with the resulting integer
//! rank, which is a strict total order consistent with the original weights.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::CsrGraph;

/// `eps` stays below `theta * (1 - 2^-20)`.
const EPS_FRACTION: f64 = 1.0 - 1.0 / (1u64 << 20) as f64;
/// `theta` fallback scale when no two weights differ.
const FLAT_THETA_SCALE: f64 = 1.0 / (1u64 << 20) as f64;

/// An undirected edge with its original and perturbed weight. `src < dst`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedEdge {
    pub src: usize,
    pub dst: usize,
    pub original: f64,
    pub altered: f64,
}

impl RankedEdge {
    /// Total order used by the solver.
    pub fn solver_order(&self, other: &Self) -> Ordering {
        self.altered
            .total_cmp(&other.altered)
            .then(self.original.total_cmp(&other.original))
            .then(self.src.cmp(&other.src))
            .then(self.dst.cmp(&other.dst))
    }
}

/// A symmetric graph whose weights have been made pairwise distinct.
#[derive(Debug, Clone)]
pub struct AlteredGraph {
    graph: CsrGraph,
    original_weights: Vec<f64>,
    theta: f64,
    seed: u64,
    slot_rank: Vec<usize>,
    by_rank: Vec<RankedEdge>,
}

impl AlteredGraph {
    /// The graph carrying perturbed weights.
    pub fn graph(&self) -> &CsrGraph {
        &self.graph
    }

    /// Pre-perturbation weights, parallel to `graph().weights()`.
    pub fn original_weights(&self) -> &[f64] {
        &self.original_weights
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of undirected edges.
    pub fn n_edges(&self) -> usize {
        self.by_rank.len()
    }

    /// Position of the entry at `slot` in the solver's total order. Both
    /// directions of an edge share a rank.
    pub fn rank_of_slot(&self, slot: usize) -> usize {
        self.slot_rank[slot]
    }

    pub fn edge(&self, rank: usize) -> RankedEdge {
        self.by_rank[rank]
    }

    /// Edges in ascending solver order.
    pub fn edges_by_rank(&self) -> &[RankedEdge] {
        &self.by_rank
    }
}

/// Smallest positive difference between two weights, if any exists.
pub fn min_weight_gap(weights: &[f64]) -> Option<f64> {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    sorted.dedup();
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g > 0.0)
        .min_by(f64::total_cmp)
}

/// Deterministic value in `[0, 1)` for an edge key and seed.
pub fn edge_noise(src: usize, dst: usize, seed: u64) -> f64 {
    let mut h = splitmix64(seed ^ 0x5851_f42d_4c95_7f2d);
    h = splitmix64(h ^ src as u64);
    h = splitmix64(h ^ (dst as u64).rotate_left(32));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Perturbs the upper triangle of `g` and mirrors it into the lower triangle.
/// Explicit zero weights are rejected.
pub fn weight_alteration(g: &CsrGraph, seed: u64) -> Result<AlteredGraph> {
    alter_weights(g, seed, false)
}

pub(crate) fn alter_weights(g: &CsrGraph, seed: u64, allow_zero: bool) -> Result<AlteredGraph> {
    let mut upper: Vec<(usize, RankedEdge)> = Vec::with_capacity(g.n_entries() / 2);
    for v in 0..g.n_vertices() {
        for slot in g.row_range(v) {
            let (dst, w) = (g.col_indices()[slot], g.weights()[slot]);
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight { src: v, dst });
            }
            if w == 0.0 && !allow_zero {
                return Err(Error::ZeroWeight { src: v, dst });
            }
            if v < dst {
                upper.push((
                    slot,
                    RankedEdge {
                        src: v,
                        dst,
                        original: w,
                        altered: w,
                    },
                ));
            }
        }
    }

    let weights: Vec<f64> = upper.iter().map(|(_, e)| e.original).collect();
    let theta = min_weight_gap(&weights).unwrap_or_else(|| {
        let scale = weights.iter().fold(1.0f64, |m, w| m.max(w.abs()));
        scale * FLAT_THETA_SCALE
    });
    for (_, e) in &mut upper {
        e.altered = e.original + edge_noise(e.src, e.dst, seed) * theta * EPS_FRACTION;
    }

    let mut order: Vec<usize> = (0..upper.len()).collect();
    order.sort_unstable_by(|&a, &b| upper[a].1.solver_order(&upper[b].1));

    let mut slot_rank = vec![usize::MAX; g.n_entries()];
    let mut altered = vec![f64::NAN; g.n_entries()];
    let mut by_rank = Vec::with_capacity(upper.len());
    for (rank, &i) in order.iter().enumerate() {
        let (slot, e) = upper[i];
        let mirror = g.find_slot(e.dst, e.src).ok_or(Error::AsymmetricGraph {
            src: e.src,
            dst: e.dst,
        })?;
        for s in [slot, mirror] {
            slot_rank[s] = rank;
            altered[s] = e.altered;
        }
        by_rank.push(e);
    }
    if let Some(slot) = slot_rank.iter().position(|&r| r == usize::MAX) {
        let src = g.row_offsets().partition_point(|&o| o <= slot) - 1;
        return Err(Error::AsymmetricGraph {
            src,
            dst: g.col_indices()[slot],
        });
    }

    Ok(AlteredGraph {
        graph: g.with_weights(altered),
        original_weights: g.weights().to_vec(),
        theta,
        seed,
        slot_rank,
        by_rank,
    })
}
