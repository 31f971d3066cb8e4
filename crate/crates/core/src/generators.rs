//! Model-space generators: trees, hyperbolic tilings, grids and random
//! graphs, with optional edge subdivision.
//!
//! Every generator is deterministic for a fixed spec (randomness is
//! seeded), marks the truncation frontier, and records its parameters in
//! the graph metadata. Subdivision splits each edge into `k` sub-edges
//! of length `edge_length / k` while keeping the original node ids, so
//! distances between original nodes are preserved.

mod tiling;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, GraphMetadata, NodeId, WeightedMetricGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorKind {
    /// Rooted tree where every node has `branching` children, truncated
    /// at depth `radius`. Frontier: the deepest level.
    RegularTree { branching: u32, radius: u32 },
    /// Ball of combinatorial radius `rings` in the 1-skeleton of the
    /// {p, q} tiling (p-gon faces, q around each vertex), built by
    /// ring-by-ring expansion. Requires 1/p + 1/q < 1/2. Frontier: the
    /// outermost distance ring.
    HyperbolicTiling { p: u32, q: u32, rings: u32 },
    /// side x side unit grid patch. Frontier: the outer boundary.
    /// Not hyperbolic at scale; serves as a control space.
    EuclideanGrid { side: u32 },
    /// G(n, prob) with a fixed seed, restricted to its largest connected
    /// component. Empty frontier: random graphs are metric stress tests
    /// only, not boundary models.
    RandomGnp { n: u32, prob: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub edge_length: f64,
    /// Each edge is split into this many sub-edges (>= 1).
    pub subdivision: u32,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind) -> Self {
        Self {
            kind,
            edge_length: 1.0,
            subdivision: 1,
        }
    }

    pub fn with_edge_length(mut self, edge_length: f64) -> Self {
        self.edge_length = edge_length;
        self
    }

    pub fn with_subdivision(mut self, k: u32) -> Self {
        self.subdivision = k;
        self
    }

    fn params_string(&self) -> String {
        let body = match &self.kind {
            GeneratorKind::RegularTree { branching, radius } => {
                format!("b={branching} R={radius}")
            }
            GeneratorKind::HyperbolicTiling { p, q, rings } => {
                format!("p={p} q={q} rings={rings}")
            }
            GeneratorKind::EuclideanGrid { side } => format!("side={side}"),
            GeneratorKind::RandomGnp { n, prob, seed } => {
                format!("n={n} prob={prob} seed={seed}")
            }
        };
        format!("{body} len={} k={}", self.edge_length, self.subdivision)
    }

    fn generator_name(&self) -> &'static str {
        match self.kind {
            GeneratorKind::RegularTree { .. } => "regular-tree",
            GeneratorKind::HyperbolicTiling { .. } => "hyperbolic-tiling",
            GeneratorKind::EuclideanGrid { .. } => "euclidean-grid",
            GeneratorKind::RandomGnp { .. } => "random-gnp",
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<WeightedMetricGraph> {
    if !(spec.edge_length > 0.0) || !spec.edge_length.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "edge_length must be positive, got {}",
            spec.edge_length
        )));
    }
    if spec.subdivision == 0 {
        return Err(Error::InvalidParameter(
            "subdivision must be >= 1".into(),
        ));
    }

    let metadata = GraphMetadata {
        generator: spec.generator_name().to_string(),
        params: spec.params_string(),
    };
    let (n, unit_edges, base, frontier) = match spec.kind {
        GeneratorKind::RegularTree { branching, radius } => {
            if branching < 2 {
                return Err(Error::InvalidParameter(format!(
                    "tree branching must be >= 2, got {branching}"
                )));
            }
            if radius < 1 {
                return Err(Error::InvalidParameter(
                    "tree radius must be >= 1".into(),
                ));
            }
            regular_tree(branching, radius)
        }
        GeneratorKind::HyperbolicTiling { p, q, rings } => {
            tiling::tiling_ball(p, q, rings)?
        }
        GeneratorKind::EuclideanGrid { side } => {
            if side < 2 {
                return Err(Error::InvalidParameter(
                    "grid side must be >= 2".into(),
                ));
            }
            euclidean_grid(side)
        }
        GeneratorKind::RandomGnp { n, prob, seed } => {
            if n == 0 {
                return Err(Error::InvalidParameter("gnp needs n >= 1".into()));
            }
            if !(0.0..=1.0).contains(&prob) {
                return Err(Error::InvalidParameter(format!(
                    "gnp probability must be in [0, 1], got {prob}"
                )));
            }
            random_gnp(n, prob, seed)
        }
    };

    let scaled: Vec<Edge> = unit_edges
        .iter()
        .map(|&(u, v)| Edge {
            u,
            v,
            length: spec.edge_length,
        })
        .collect();
    let g = WeightedMetricGraph::new(n, scaled, base, frontier, metadata)?;
    if spec.subdivision > 1 {
        subdivide(&g, spec.subdivision)
    } else {
        Ok(g)
    }
}

/// Split every edge into `k` equal sub-edges. Original nodes keep their
/// ids; chain nodes are appended in edge order, so the output is
/// deterministic. Exact for dyadic sub-lengths (k a power of two).
pub fn subdivide(g: &WeightedMetricGraph, k: u32) -> Result<WeightedMetricGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("subdivision must be >= 1".into()));
    }
    if k == 1 {
        return Ok(g.clone());
    }
    let mut n = g.node_count();
    let mut edges = Vec::with_capacity(g.edge_count() * k as usize);
    for e in g.edges() {
        let sub = e.length / k as f64;
        let mut prev = e.u;
        for i in 1..k {
            let mid = n as NodeId;
            n += 1;
            edges.push(Edge {
                u: prev,
                v: mid,
                length: sub,
            });
            prev = mid;
            let _ = i;
        }
        edges.push(Edge {
            u: prev,
            v: e.v,
            length: sub,
        });
    }
    WeightedMetricGraph::new(
        n,
        edges,
        g.base(),
        g.frontier().to_vec(),
        g.metadata().clone(),
    )
}

type UnitGraph = (usize, Vec<(NodeId, NodeId)>, NodeId, Vec<NodeId>);

fn regular_tree(branching: u32, radius: u32) -> UnitGraph {
    let mut edges = Vec::new();
    let mut level: Vec<NodeId> = vec![0];
    let mut next_id: NodeId = 1;
    for _ in 0..radius {
        let mut next_level = Vec::with_capacity(level.len() * branching as usize);
        for &parent in &level {
            for _ in 0..branching {
                edges.push((parent, next_id));
                next_level.push(next_id);
                next_id += 1;
            }
        }
        level = next_level;
    }
    (next_id as usize, edges, 0, level)
}

fn euclidean_grid(side: u32) -> UnitGraph {
    let id = |r: u32, c: u32| (r * side + c) as NodeId;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let center = id((side - 1) / 2, (side - 1) / 2);
    let mut frontier = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if r == 0 || c == 0 || r == side - 1 || c == side - 1 {
                frontier.push(id(r, c));
            }
        }
    }
    ((side * side) as usize, edges, center, frontier)
}

fn random_gnp(n: u32, prob: f64, seed: u64) -> UnitGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < prob {
                edges.push((u, v));
            }
        }
    }
    // Largest connected component, smallest minimum node id on ties.
    let mut comp = vec![usize::MAX; n as usize];
    let mut adj = vec![Vec::new(); n as usize];
    for &(u, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut sizes = Vec::new();
    for start in 0..n as usize {
        if comp[start] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut stack = vec![start];
        comp[start] = c;
        let mut size = 0usize;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in &adj[u] {
                if comp[v as usize] == usize::MAX {
                    comp[v as usize] = c;
                    stack.push(v as usize);
                }
            }
        }
        sizes.push(size);
    }
    let keep = sizes
        .iter()
        .enumerate()
        .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
        .unwrap();

    let mut remap = vec![NodeId::MAX; n as usize];
    let mut kept = 0 as NodeId;
    for u in 0..n as usize {
        if comp[u] == keep {
            remap[u] = kept;
            kept += 1;
        }
    }
    let edges = edges
        .into_iter()
        .filter(|&(u, _)| comp[u as usize] == keep)
        .map(|(u, v)| (remap[u as usize], remap[v as usize]))
        .collect();
    (kept as usize, edges, 0, Vec::new())
}
