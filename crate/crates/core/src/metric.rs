//! Shortest-path distances: single-source, multi-source and the full
//! all-pairs table.
//!
//! Per-source rows are independent Dijkstra runs, so the table is built
//! with a parallel map over sources. Rows are plain `f64` sums of edge
//! lengths; nothing here mutates shared state.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::graph::{NodeId, WeightedMetricGraph};

/// Min-heap entry ordered by cost via `total_cmp`, then node id so that
/// pops are fully deterministic.
#[derive(Debug, PartialEq)]
struct HeapEntry {
    cost: f64,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse: BinaryHeap is a max-heap, we want the cheapest first.
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(g: &WeightedMetricGraph, sources: &[NodeId]) -> Vec<f64> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::with_capacity(n);
    for &s in sources {
        dist[s as usize] = 0.0;
        heap.push(HeapEntry { cost: 0.0, node: s });
    }
    while let Some(HeapEntry { cost, node }) = heap.pop() {
        if cost > dist[node as usize] {
            continue;
        }
        for &(next, len) in g.neighbors(node) {
            let next_cost = cost + len;
            if next_cost < dist[next as usize] {
                dist[next as usize] = next_cost;
                heap.push(HeapEntry {
                    cost: next_cost,
                    node: next,
                });
            }
        }
    }
    dist
}

/// Distances from one node to all nodes.
pub fn single_source(g: &WeightedMetricGraph, source: NodeId) -> Vec<f64> {
    dijkstra(g, &[source])
}

/// Distance to the nearest of `sources` for every node. Used for
/// frontier distances (one pass instead of one Dijkstra per frontier
/// node).
pub fn multi_source(g: &WeightedMetricGraph, sources: &[NodeId]) -> Vec<f64> {
    dijkstra(g, sources)
}

/// Dense all-pairs shortest-path table, row-major.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    data: Vec<f64>,
}

impl DistanceTable {
    pub fn compute(g: &WeightedMetricGraph) -> Self {
        let n = g.node_count();
        let rows: Vec<Vec<f64>> = (0..n as NodeId)
            .into_par_iter()
            .map(|s| single_source(g, s))
            .collect();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend_from_slice(&row);
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: NodeId, y: NodeId) -> f64 {
        self.data[x as usize * self.n + y as usize]
    }

    #[inline]
    pub fn row(&self, x: NodeId) -> &[f64] {
        &self.data[x as usize * self.n..(x as usize + 1) * self.n]
    }

    /// Largest pairwise distance and a witnessing pair (first in row-major
    /// order on ties).
    pub fn diameter(&self) -> (f64, (NodeId, NodeId)) {
        let mut best = (0.0, (0, 0));
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                let d = self.data[x * self.n + y];
                if d > best.0 {
                    best = (d, (x as NodeId, y as NodeId));
                }
            }
        }
        best
    }
}
