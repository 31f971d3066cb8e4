//! Combinatorial {p, q} tiling patches.
//!
//! The patch grows face ring by face ring from a central vertex: every
//! boundary vertex is completed to its full complement of q faces by
//! attaching new p-gons in the angular gap, then the outer rim becomes
//! the next boundary. No coordinates are involved; the structure is
//! pure incidence bookkeeping. A vertex adjacent only to rings `r-1`
//! and `r` can first appear in face ring `r`, so after `R` rings the
//! patch contains the full combinatorial ball of radius `R`, which is
//! what gets returned (frontier: the outermost distance ring).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::NodeId;

/// (node count, unit edges, base, frontier)
type UnitGraph = (usize, Vec<(NodeId, NodeId)>, NodeId, Vec<NodeId>);

struct Patch {
    next_id: NodeId,
    edges: Vec<(NodeId, NodeId)>,
    faces_at: Vec<u32>,
    boundary: Vec<NodeId>,
    faces: usize,
}

impl Patch {
    fn new_vertex(&mut self) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.faces_at.push(0);
        id
    }

    fn add_edge(&mut self, u: NodeId, v: NodeId) {
        self.edges.push((u, v));
    }
}

pub(super) fn tiling_ball(p: u32, q: u32, rings: u32) -> Result<UnitGraph> {
    if p < 3 || q < 3 {
        return Err(Error::InvalidParameter(format!(
            "tiling needs p, q >= 3, got ({p}, {q})"
        )));
    }
    // 1/p + 1/q < 1/2, i.e. (p-2)(q-2) > 4.
    if (p - 2) * (q - 2) <= 4 {
        return Err(Error::InvalidParameter(format!(
            "tiling ({p}, {q}) is not hyperbolic: requires 1/p + 1/q < 1/2"
        )));
    }
    if rings < 1 {
        return Err(Error::InvalidParameter("tiling needs rings >= 1".into()));
    }

    let mut patch = first_ring(p, q);
    for _ in 1..rings {
        expand_ring(&mut patch, p as usize, q)?;
    }
    debug_assert!(euler_defect(&patch) == 1, "patch is not a disk");
    Ok(truncate_to_ball(&patch, rings))
}

/// The q faces around the central vertex.
fn first_ring(p: u32, q: u32) -> Patch {
    let mut patch = Patch {
        next_id: 0,
        edges: Vec::new(),
        faces_at: Vec::new(),
        boundary: Vec::new(),
        faces: 0,
    };
    let center = patch.new_vertex();
    let tops: Vec<NodeId> = (0..q).map(|_| patch.new_vertex()).collect();
    for &t in &tops {
        patch.add_edge(center, t);
    }
    patch.faces_at[center as usize] = q;

    let mut boundary = Vec::new();
    for i in 0..q as usize {
        let t0 = tops[i];
        let t1 = tops[(i + 1) % q as usize];
        boundary.push(t0);
        patch.faces_at[t0 as usize] += 1;
        patch.faces_at[t1 as usize] += 1;
        // Chain of p-3 vertices closing the p-gon (none for triangles).
        let mut prev = t0;
        for _ in 0..p.saturating_sub(3) {
            let a = patch.new_vertex();
            patch.faces_at[a as usize] += 1;
            patch.add_edge(prev, a);
            boundary.push(a);
            prev = a;
        }
        patch.add_edge(prev, t1);
        patch.faces += 1;
    }
    patch.boundary = boundary;
    patch
}

/// Complete every current boundary vertex with new faces; the outer rim
/// of the new annulus becomes the boundary.
fn expand_ring(patch: &mut Patch, p: usize, q: u32) -> Result<()> {
    let boundary = std::mem::take(&mut patch.boundary);
    let b = boundary.len();

    // One entry per spoke (new edge rising from the boundary), in walk
    // order; a vertex with s spokes contributes s consecutive entries.
    let mut spokes: Vec<usize> = Vec::new();
    for (i, &v) in boundary.iter().enumerate() {
        let f = patch.faces_at[v as usize];
        if f >= q {
            return Err(Error::InvalidGraph(format!(
                "tiling construction: boundary vertex {v} already complete"
            )));
        }
        for _ in 0..(q - f - 1) {
            spokes.push(i);
        }
    }
    let s_count = spokes.len();
    if s_count < 2 {
        return Err(Error::InvalidGraph(
            "tiling construction: degenerate ring (too few spokes)".into(),
        ));
    }

    // Face j sits between spoke j and spoke j+1; its base path runs
    // along the old boundary and the rest of the p-gon closes above it.
    let ell = |j: usize| ((spokes[(j + 1) % s_count] + b - spokes[j]) % b) + 1;
    let mut arc_edges = Vec::with_capacity(s_count);
    for j in 0..s_count {
        let l = ell(j);
        if l + 1 > p {
            return Err(Error::InvalidGraph(format!(
                "tiling construction: base path of {l} vertices cannot fit a {p}-gon"
            )));
        }
        arc_edges.push(p - l - 1);
    }

    // arc_edges == 0 glues the tops of adjacent spokes into one vertex.
    let start = arc_edges
        .iter()
        .position(|&e| e > 0)
        .ok_or_else(|| Error::InvalidGraph("tiling construction: all faces merge".into()))?;
    let mut group = vec![usize::MAX; s_count];
    let mut gid = 0usize;
    let mut j = (start + 1) % s_count;
    for _ in 0..s_count {
        group[j] = gid;
        if arc_edges[j] > 0 {
            gid += 1;
        }
        j = (j + 1) % s_count;
    }
    let tops: Vec<NodeId> = (0..gid).map(|_| patch.new_vertex()).collect();

    for (j, &pos) in spokes.iter().enumerate() {
        patch.add_edge(boundary[pos], tops[group[j]]);
    }

    let mut new_boundary: Vec<NodeId> = Vec::new();
    let mut j = (start + 1) % s_count;
    for _ in 0..s_count {
        let top = tops[group[j]];
        if new_boundary.last() != Some(&top) {
            new_boundary.push(top);
        }
        // Base membership.
        let l = ell(j);
        for t in 0..l {
            let v = boundary[(spokes[j] + t) % b];
            patch.faces_at[v as usize] += 1;
        }
        // Top membership (one vertex when the face merges two spokes).
        let next_top = tops[group[(j + 1) % s_count]];
        patch.faces_at[top as usize] += 1;
        if next_top != top {
            patch.faces_at[next_top as usize] += 1;
        }
        // Outer chain.
        let m = arc_edges[j];
        if m > 0 {
            let mut prev = top;
            for _ in 0..m - 1 {
                let a = patch.new_vertex();
                patch.faces_at[a as usize] += 1;
                patch.add_edge(prev, a);
                new_boundary.push(a);
                prev = a;
            }
            patch.add_edge(prev, next_top);
        }
        patch.faces += 1;
        j = (j + 1) % s_count;
    }

    for &v in &boundary {
        if patch.faces_at[v as usize] != q {
            return Err(Error::InvalidGraph(format!(
                "tiling construction: vertex {v} ended with {} faces, expected {q}",
                patch.faces_at[v as usize]
            )));
        }
    }
    patch.boundary = new_boundary;
    Ok(())
}

/// V - E + F for the bounded faces; 1 for a disk.
fn euler_defect(patch: &Patch) -> i64 {
    patch.next_id as i64 - patch.edges.len() as i64 + patch.faces as i64
}

fn truncate_to_ball(patch: &Patch, radius: u32) -> UnitGraph {
    let n = patch.next_id as usize;
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &patch.edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    dist[0] = 0;
    queue.push_back(0u32);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u as usize] {
            if dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }

    let mut remap = vec![NodeId::MAX; n];
    let mut kept: NodeId = 0;
    for v in 0..n {
        if dist[v] <= radius {
            remap[v] = kept;
            kept += 1;
        }
    }
    let edges = patch
        .edges
        .iter()
        .filter(|&&(u, v)| dist[u as usize] <= radius && dist[v as usize] <= radius)
        .map(|&(u, v)| (remap[u as usize], remap[v as usize]))
        .collect();
    let frontier = (0..n)
        .filter(|&v| dist[v] == radius)
        .map(|v| remap[v])
        .collect();
    (kept as usize, edges, 0, frontier)
}
