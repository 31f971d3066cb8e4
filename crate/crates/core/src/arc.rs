//! Paths with a cumulative arclength parametrization.
//!
//! An [`ArcPath`] is the discrete stand-in for an arclength-parametrized
//! arc: a node sequence whose consecutive nodes are joined by edges,
//! together with the running sum of edge lengths. Points "on" an arc are
//! its vertices; sub-arc lengths come from the cumulative sums. Finer
//! parameter resolution is obtained by subdividing the graph, not by
//! interpolating here.

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedMetricGraph};
use crate::tolerances::SLACK_ABS;

#[derive(Debug, Clone, PartialEq)]
pub struct ArcPath {
    nodes: Vec<NodeId>,
    cum: Vec<f64>,
}

impl ArcPath {
    /// Build an arc from a node sequence, validating adjacency and
    /// accumulating edge lengths in sequence order.
    pub fn new(g: &WeightedMetricGraph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArc("empty node sequence".into()));
        }
        let mut cum = Vec::with_capacity(nodes.len());
        cum.push(0.0);
        for w in nodes.windows(2) {
            let len = g.edge_length(w[0], w[1]).ok_or_else(|| {
                Error::InvalidArc(format!("nodes {} and {} are not adjacent", w[0], w[1]))
            })?;
            cum.push(cum.last().unwrap() + len);
        }
        Ok(Self { nodes, cum })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Cumulative arclength at each vertex; starts at 0, nondecreasing.
    pub fn params(&self) -> &[f64] {
        &self.cum
    }

    pub fn first(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn last(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid arc has at least one node
    }

    /// Total arclength.
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    /// Whether the arc is h-short for endpoints at distance `dist`:
    /// length <= dist + h, up to the global slack.
    pub fn is_h_short(&self, dist: f64, h: f64) -> bool {
        self.length() <= dist + h + SLACK_ABS
    }

    /// True when no node repeats (the arc is a simple path).
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.nodes.len());
        self.nodes.iter().all(|&v| seen.insert(v))
    }

    /// Sub-arc length between vertex indices `i <= j`.
    pub fn sub_length(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i <= j);
        self.cum[j] - self.cum[i]
    }

    /// Index of the vertex whose parameter is closest to `t` (earlier
    /// index on ties).
    pub fn vertex_at_param(&self, t: f64) -> usize {
        let mut best = 0;
        let mut gap = (self.cum[0] - t).abs();
        for (i, &c) in self.cum.iter().enumerate().skip(1) {
            let d = (c - t).abs();
            if d < gap {
                gap = d;
                best = i;
            }
        }
        best
    }

    /// Last vertex index whose parameter is <= `t` (plus slack).
    pub fn last_vertex_before(&self, t: f64) -> usize {
        let mut idx = 0;
        for (i, &c) in self.cum.iter().enumerate() {
            if c <= t + SLACK_ABS {
                idx = i;
            } else {
                break;
            }
        }
        idx
    }

    /// Concatenate `self` with `other`, which must start where `self`
    /// ends. The result re-accumulates lengths and may repeat nodes.
    pub fn concat(&self, g: &WeightedMetricGraph, other: &ArcPath) -> Result<ArcPath> {
        if self.last() != other.first() {
            return Err(Error::InvalidArc(format!(
                "cannot concatenate: {} != {}",
                self.last(),
                other.first()
            )));
        }
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes[1..]);
        ArcPath::new(g, nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, GraphMetadata};

    fn path_graph(n: usize) -> WeightedMetricGraph {
        let edges = (0..n - 1)
            .map(|i| Edge {
                u: i as NodeId,
                v: (i + 1) as NodeId,
                length: 1.0,
            })
            .collect();
        WeightedMetricGraph::new(n, edges, 0, vec![], GraphMetadata::default()).unwrap()
    }

    #[test]
    fn cumulative_lengths() {
        let g = path_graph(4);
        let a = ArcPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(a.params(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(a.length(), 3.0);
        assert_eq!(a.sub_length(1, 3), 2.0);
        assert!(a.is_simple());
    }

    #[test]
    fn single_node_arc() {
        let g = path_graph(2);
        let a = ArcPath::new(&g, vec![1]).unwrap();
        assert_eq!(a.length(), 0.0);
        assert_eq!(a.first(), 1);
        assert_eq!(a.last(), 1);
        assert!(a.is_h_short(0.0, 0.0));
    }

    #[test]
    fn rejects_non_adjacent() {
        let g = path_graph(4);
        assert!(ArcPath::new(&g, vec![0, 2]).is_err());
        assert!(ArcPath::new(&g, vec![]).is_err());
    }

    #[test]
    fn h_short_flag() {
        let g = path_graph(4);
        let a = ArcPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert!(a.is_h_short(3.0, 0.0));
        assert!(a.is_h_short(2.5, 0.5));
        assert!(!a.is_h_short(2.5, 0.4));
    }

    #[test]
    fn vertex_lookup() {
        let g = path_graph(5);
        let a = ArcPath::new(&g, vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(a.vertex_at_param(2.2), 2);
        assert_eq!(a.vertex_at_param(2.5), 2); // earlier index on ties
        assert_eq!(a.last_vertex_before(2.999), 2);
        assert_eq!(a.last_vertex_before(3.0), 3);
    }

    #[test]
    fn concat_revalidates() {
        let g = path_graph(5);
        let a = ArcPath::new(&g, vec![0, 1, 2]).unwrap();
        let b = ArcPath::new(&g, vec![2, 3, 4]).unwrap();
        let c = a.concat(&g, &b).unwrap();
        assert_eq!(c.nodes(), &[0, 1, 2, 3, 4]);
        assert_eq!(c.length(), 4.0);
        assert!(a.concat(&g, &a).is_err());
    }
}
