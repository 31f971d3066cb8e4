//! Deterministic pair sampling for the scan-style checks.
//!
//! Small node sets are scanned exhaustively; larger ones fall back to a
//! seeded uniform sample, always topped up with every (base, frontier)
//! pair so the extremal directions are never missed. Output order is
//! sorted and deduplicated, so a fixed seed yields a fixed sample
//! independent of thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{NodeId, WeightedMetricGraph};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairSampleConfig {
    /// Scan all pairs when the node set is at most this large.
    pub exhaustive_limit: usize,
    /// Number of random draws otherwise (collisions are deduplicated).
    pub sample_size: usize,
    pub seed: u64,
}

impl Default for PairSampleConfig {
    fn default() -> Self {
        Self {
            exhaustive_limit: 200,
            sample_size: 5000,
            seed: 0,
        }
    }
}

/// All unordered pairs (i < j) of `nodes`.
pub fn all_pairs(nodes: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::with_capacity(nodes.len() * (nodes.len().saturating_sub(1)) / 2);
    for (i, &x) in nodes.iter().enumerate() {
        for &y in &nodes[i + 1..] {
            out.push((x.min(y), x.max(y)));
        }
    }
    out
}

/// Pairs over the whole graph, per the sampling policy, plus every
/// (base, frontier) pair.
pub fn sample_pairs(g: &WeightedMetricGraph, cfg: &PairSampleConfig) -> Vec<(NodeId, NodeId)> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut pairs = sample_pairs_among(&nodes, cfg);
    let base = g.base();
    for &f in g.frontier() {
        if f != base {
            pairs.push((base.min(f), base.max(f)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Pairs within an explicit node subset (e.g. inner nodes only).
pub fn sample_pairs_among(nodes: &[NodeId], cfg: &PairSampleConfig) -> Vec<(NodeId, NodeId)> {
    if nodes.len() <= cfg.exhaustive_limit {
        return all_pairs(nodes);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pairs = Vec::with_capacity(cfg.sample_size);
    for _ in 0..cfg.sample_size {
        let i = rng.gen_range(0..nodes.len());
        let j = rng.gen_range(0..nodes.len());
        if i == j {
            continue;
        }
        let (x, y) = (nodes[i], nodes[j]);
        pairs.push((x.min(y), x.max(y)));
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}
