//! Shortest arcs and h-short arc enumeration.
//!
//! Shortest-path ties are broken lexicographically on the node-id
//! sequence, which makes every arc returned here deterministic and thus
//! every report reproducible. `h_short_arcs` enumerates simple paths in
//! increasing (length, sequence) order, Yen-style, and stops at the
//! first path longer than `d(x, y) + h`.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::arc::ArcPath;
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedMetricGraph};
use crate::metric::single_source;
use crate::tolerances::{PATH_EQ_ABS, SLACK_ABS};

/// Lexicographically smallest shortest arc from `x` to `y`.
pub fn shortest_arc(g: &WeightedMetricGraph, x: NodeId, y: NodeId) -> Result<ArcPath> {
    let to_y = single_source(g, y);
    shortest_arc_with_row(g, &to_y, x, y)
}

/// Same as [`shortest_arc`], reusing a precomputed distance row
/// `to_y[v] = d(v, y)` (e.g. a column of a [`DistanceTable`]).
///
/// [`DistanceTable`]: crate::metric::DistanceTable
/// Walk from `x` towards `y`, always taking the smallest-id neighbor
/// that stays on a shortest path. The admissibility test compares
/// against the distance row rather than an accumulated sum, so rounding
/// does not drift with path length.
pub fn shortest_arc_with_row(
    g: &WeightedMetricGraph,
    to_y: &[f64],
    x: NodeId,
    y: NodeId,
) -> Result<ArcPath> {
    if to_y[x as usize].is_infinite() {
        return Err(Error::InvalidArc(format!("no path from {x} to {y}")));
    }
    let mut nodes = vec![x];
    let mut current = x;
    while current != y {
        let remaining = to_y[current as usize];
        let mut step = None;
        for &(v, len) in g.neighbors(current) {
            if (len + to_y[v as usize] - remaining).abs() <= PATH_EQ_ABS {
                step = Some(v);
                break; // neighbors are sorted by id: first hit is lex-min
            }
        }
        match step {
            Some(v) => {
                nodes.push(v);
                current = v;
            }
            None => {
                return Err(Error::InvalidArc(format!(
                    "shortest-path reconstruction stuck at node {current}"
                )))
            }
        }
    }
    ArcPath::new(g, nodes)
}

/// Candidate path ordered by (length, node sequence).
struct Candidate {
    length: f64,
    nodes: Vec<NodeId>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.length
            .total_cmp(&other.length)
            .then_with(|| self.nodes.cmp(&other.nodes))
    }
}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All simple arcs from `x` to `y` of length at most `d(x, y) + h`, in
/// increasing (length, sequence) order, capped at `limit`. The shortest
/// arc is always first. `limit == 0` returns nothing.
pub fn h_short_arcs(
    g: &WeightedMetricGraph,
    x: NodeId,
    y: NodeId,
    h: f64,
    limit: usize,
) -> Result<Vec<ArcPath>> {
    if h < 0.0 || !h.is_finite() {
        return Err(Error::InvalidParameter(format!("h must be >= 0, got {h}")));
    }
    if limit == 0 {
        return Ok(Vec::new());
    }
    if x == y {
        // The trivial arc is the only simple path; cycles revisit x.
        return Ok(vec![ArcPath::new(g, vec![x])?]);
    }

    let to_y = single_source(g, y);
    let dist = to_y[x as usize];
    if dist.is_infinite() {
        return Err(Error::InvalidArc(format!("no path from {x} to {y}")));
    }
    let cutoff = dist + h + SLACK_ABS;

    let first = shortest_arc_with_row(g, &to_y, x, y)?;
    let mut accepted: Vec<ArcPath> = vec![first];
    let mut seen: HashSet<Vec<NodeId>> = HashSet::new();
    seen.insert(accepted[0].nodes().to_vec());
    let mut candidates: BinaryHeap<Reverse<Candidate>> = BinaryHeap::new();

    let mut k = 0;
    while accepted.len() < limit {
        if k >= accepted.len() {
            break;
        }
        // Spur phase on the k-th accepted path (Yen).
        let previous: Vec<NodeId> = accepted[k].nodes().to_vec();
        for i in 0..previous.len() - 1 {
            let spur = previous[i];
            let root = &previous[..i];

            let mut banned_nodes = vec![false; g.node_count()];
            for &r in root {
                banned_nodes[r as usize] = true;
            }
            let mut banned_edges: HashSet<(NodeId, NodeId)> = HashSet::new();
            for path in accepted.iter().map(|a| a.nodes()) {
                if path.len() > i + 1 && &path[..i] == root && path[i] == spur {
                    let (a, b) = (path[i], path[i + 1]);
                    banned_edges.insert((a.min(b), a.max(b)));
                }
            }

            let Some(spur_tail) =
                banned_dijkstra_lex(g, y, spur, &banned_nodes, &banned_edges)
            else {
                continue;
            };
            let mut nodes = root.to_vec();
            nodes.extend_from_slice(&spur_tail);
            if seen.contains(&nodes) {
                continue;
            }
            let arc = ArcPath::new(g, nodes)?;
            if arc.length() > cutoff {
                continue; // too long already; never useful
            }
            seen.insert(arc.nodes().to_vec());
            candidates.push(Reverse(Candidate {
                length: arc.length(),
                nodes: arc.nodes().to_vec(),
            }));
        }
        k += 1;

        if accepted.len() < limit && k >= accepted.len() {
            // All spurs of accepted paths processed: promote the best
            // candidate, if any survives the cutoff.
            match candidates.pop() {
                Some(Reverse(c)) if c.length <= cutoff => {
                    accepted.push(ArcPath::new(g, c.nodes)?);
                }
                _ => break,
            }
        }
    }
    Ok(accepted)
}

/// Shortest distances to `target` avoiding banned nodes/edges, then a
/// lex-min reconstruction from `spur`. Returns the node sequence
/// `spur..=target`, or None when no path survives the bans.
fn banned_dijkstra_lex(
    g: &WeightedMetricGraph,
    target: NodeId,
    spur: NodeId,
    banned_nodes: &[bool],
    banned_edges: &HashSet<(NodeId, NodeId)>,
) -> Option<Vec<NodeId>> {
    use std::collections::BinaryHeap as Heap;

    #[derive(PartialEq)]
    struct E {
        cost: f64,
        node: NodeId,
    }
    impl Eq for E {}
    impl Ord for E {
        fn cmp(&self, other: &Self) -> Ordering {
            other
                .cost
                .total_cmp(&self.cost)
                .then_with(|| other.node.cmp(&self.node))
        }
    }
    impl PartialOrd for E {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }

    let blocked = |a: NodeId, b: NodeId| banned_edges.contains(&(a.min(b), a.max(b)));

    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = Heap::new();
    dist[target as usize] = 0.0;
    heap.push(E {
        cost: 0.0,
        node: target,
    });
    while let Some(E { cost, node }) = heap.pop() {
        if cost > dist[node as usize] {
            continue;
        }
        for &(next, len) in g.neighbors(node) {
            if banned_nodes[next as usize] && next != spur {
                continue;
            }
            if blocked(node, next) {
                continue;
            }
            let c = cost + len;
            if c < dist[next as usize] {
                dist[next as usize] = c;
                heap.push(E { cost: c, node: next });
            }
        }
    }
    if dist[spur as usize].is_infinite() {
        return None;
    }

    // Lex-min walk from spur to target under the same bans.
    let mut nodes = vec![spur];
    let mut current = spur;
    while current != target {
        let remaining = dist[current as usize];
        let mut step = None;
        for &(v, len) in g.neighbors(current) {
            if (banned_nodes[v as usize] && v != target) || blocked(current, v) {
                continue;
            }
            if (len + dist[v as usize] - remaining).abs() <= PATH_EQ_ABS {
                step = Some(v);
                break;
            }
        }
        current = step?;
        nodes.push(current);
    }
    Some(nodes)
}
