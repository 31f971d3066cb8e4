//! Finite, connected, positively weighted graphs used as metric spaces.
//!
//! A [`WeightedMetricGraph`] is the discrete stand-in for a truncated
//! intrinsic space: shortest-path distance plays the role of the metric,
//! the `base` node is the deformation base point, and the `frontier` set
//! marks the nodes at the truncation radius (the computable boundary
//! proxy). Graphs are immutable after construction and validated up
//! front, so downstream scans never re-check structure.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node identifier; nodes are always the contiguous range `0..n`.
pub type NodeId = u32;

/// Canonical undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub length: f64,
}

/// Where a graph came from; carried through reports for reproducibility.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub generator: String,
    pub params: String,
}

#[derive(Debug, Clone)]
pub struct WeightedMetricGraph {
    n: usize,
    adj: Vec<Vec<(NodeId, f64)>>,
    edges: Vec<Edge>,
    base: NodeId,
    frontier: Vec<NodeId>,
    metadata: GraphMetadata,
}

impl WeightedMetricGraph {
    /// Build and validate a graph. Rejects self-loops, non-positive or
    /// non-finite lengths, duplicate edges, out-of-range endpoints,
    /// disconnected graphs and invalid base/frontier nodes.
    pub fn new(
        n: usize,
        edges: Vec<Edge>,
        base: NodeId,
        frontier: Vec<NodeId>,
        metadata: GraphMetadata,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no nodes".into()));
        }
        if base as usize >= n {
            return Err(Error::InvalidGraph(format!(
                "base point {base} out of range (n = {n})"
            )));
        }
        let mut edges = edges;
        for e in &mut edges {
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.u)));
            }
            if e.u as usize >= n || e.v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) out of range (n = {n})",
                    e.u, e.v
                )));
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has non-positive length {}",
                    e.u, e.v, e.length
                )));
            }
            if e.u > e.v {
                std::mem::swap(&mut e.u, &mut e.v);
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        for w in edges.windows(2) {
            if w[0].u == w[1].u && w[0].v == w[1].v {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    w[0].u, w[0].v
                )));
            }
        }

        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u as usize].push((e.v, e.length));
            adj[e.v as usize].push((e.u, e.length));
        }
        // Neighbor lists sorted by id: scans and tie-breaks rely on it.
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }

        let mut frontier = frontier;
        frontier.sort_unstable();
        frontier.dedup();
        if let Some(&f) = frontier.iter().find(|&&f| f as usize >= n) {
            return Err(Error::InvalidGraph(format!(
                "frontier node {f} out of range (n = {n})"
            )));
        }

        let g = Self {
            n,
            adj,
            edges,
            base,
            frontier,
            metadata,
        };
        if let Some(unreached) = g.first_unreachable(base) {
            return Err(Error::InvalidGraph(format!(
                "graph is disconnected: node {unreached} unreachable from {base}"
            )));
        }
        Ok(g)
    }

    fn first_unreachable(&self, start: NodeId) -> Option<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[start as usize] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n as NodeId).into_iter()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.adj[u as usize]
    }

    /// Length of the edge (u, v), if present.
    pub fn edge_length(&self, u: NodeId, v: NodeId) -> Option<f64> {
        self.adj[u as usize]
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, l)| l)
    }

    pub fn base(&self) -> NodeId {
        self.base
    }

    pub fn frontier(&self) -> &[NodeId] {
        &self.frontier
    }

    pub fn is_frontier(&self, u: NodeId) -> bool {
        self.frontier.binary_search(&u).is_ok()
    }

    pub fn metadata(&self) -> &GraphMetadata {
        &self.metadata
    }

    /// Same topology with every edge length replaced by `f(edge)`.
    /// Used by the conformal deformation; base, frontier and metadata
    /// carry over.
    pub fn reweighted<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Edge) -> f64,
    {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                u: e.u,
                v: e.v,
                length: f(e),
            })
            .collect();
        Self::new(
            self.n,
            edges,
            self.base,
            self.frontier.clone(),
            self.metadata.clone(),
        )
    }

    /// Serialize to the text edge-list format:
    ///
    /// ```text
    /// nodes N base P
    /// frontier i j k ...        (omitted when empty)
    /// u v length                (one line per edge, sorted by (u, v))
    /// ```
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nodes {} base {}", self.n, self.base);
        if !self.frontier.is_empty() {
            out.push_str("frontier");
            for f in &self.frontier {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.length);
        }
        out
    }

    /// Parse the text edge-list format produced by [`to_edge_list`].
    ///
    /// [`to_edge_list`]: WeightedMetricGraph::to_edge_list
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (mut n, mut base) = (None, None);
        for (idx, line) in lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "nodes" || toks[2] != "base" {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `nodes N base P`, got `{line}`"),
                });
            }
            n = Some(parse_num::<usize>(toks[1], idx)?);
            base = Some(parse_num::<NodeId>(toks[3], idx)?);
            break;
        }
        let (n, base) = match (n, base) {
            (Some(n), Some(b)) => (n, b),
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing `nodes N base P` header".into(),
                })
            }
        };

        let mut frontier = Vec::new();
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "frontier" {
                for t in &toks[1..] {
                    frontier.push(parse_num::<NodeId>(t, idx)?);
                }
                continue;
            }
            if toks.len() != 3 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `u v length`, got `{line}`"),
                });
            }
            edges.push(Edge {
                u: parse_num::<NodeId>(toks[0], idx)?,
                v: parse_num::<NodeId>(toks[1], idx)?,
                length: parse_num::<f64>(toks[2], idx)?,
            });
        }
        Self::new(n, edges, base, frontier, GraphMetadata::default())
    }

    pub fn write_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn read_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_edge_list(&text)
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, idx: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line: idx + 1,
        message: format!("cannot parse `{tok}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_edges(pairs: &[(NodeId, NodeId)]) -> Vec<Edge> {
        pairs
            .iter()
            .map(|&(u, v)| Edge { u, v, length: 1.0 })
            .collect()
    }

    #[test]
    fn path_graph_builds() {
        let g = WeightedMetricGraph::new(
            3,
            unit_edges(&[(0, 1), (1, 2)]),
            0,
            vec![2],
            GraphMetadata::default(),
        )
        .unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_frontier(2));
        assert!(!g.is_frontier(1));
        assert_eq!(g.edge_length(1, 0), Some(1.0));
        assert_eq!(g.edge_length(0, 2), None);
    }

    #[test]
    fn rejects_self_loop() {
        let err = WeightedMetricGraph::new(
            2,
            unit_edges(&[(0, 0)]),
            0,
            vec![],
            GraphMetadata::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidGraph(_)));
    }

    #[test]
    fn rejects_nonpositive_length() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = WeightedMetricGraph::new(
                2,
                vec![Edge {
                    u: 0,
                    v: 1,
                    length: bad,
                }],
                0,
                vec![],
                GraphMetadata::default(),
            )
            .unwrap_err();
            assert!(matches!(err, Error::InvalidGraph(_)), "length {bad}");
        }
    }

    #[test]
    fn rejects_disconnected() {
        let err = WeightedMetricGraph::new(
            4,
            unit_edges(&[(0, 1), (2, 3)]),
            0,
            vec![],
            GraphMetadata::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("disconnected"));
    }

    #[test]
    fn rejects_duplicate_edges() {
        let err = WeightedMetricGraph::new(
            2,
            unit_edges(&[(0, 1), (1, 0)]),
            0,
            vec![],
            GraphMetadata::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = WeightedMetricGraph::new(
            4,
            vec![
                Edge {
                    u: 0,
                    v: 1,
                    length: 1.0,
                },
                Edge {
                    u: 1,
                    v: 2,
                    length: 0.25,
                },
                Edge {
                    u: 2,
                    v: 3,
                    length: 1.5,
                },
                Edge {
                    u: 0,
                    v: 3,
                    length: 2.0,
                },
            ],
            1,
            vec![3, 2],
            GraphMetadata::default(),
        )
        .unwrap();
        let text = g.to_edge_list();
        let h = WeightedMetricGraph::from_edge_list(&text).unwrap();
        assert_eq!(h.to_edge_list(), text);
        assert_eq!(h.base(), 1);
        assert_eq!(h.frontier(), &[2, 3]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(WeightedMetricGraph::from_edge_list("").is_err());
        assert!(WeightedMetricGraph::from_edge_list("nodes 2\n0 1 1.0").is_err());
        assert!(WeightedMetricGraph::from_edge_list("nodes 2 base 0\n0 1").is_err());
        assert!(WeightedMetricGraph::from_edge_list("nodes 2 base 0\n0 one 1.0").is_err());
    }
}
