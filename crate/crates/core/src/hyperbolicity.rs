//! Gromov products, four-point hyperbolicity and the arc comparison
//! checks built on them.
//!
//! The four-point constant is computed exactly. Base-point mode scans
//! all triples against a fixed base in O(n^3). Global mode scans
//! quadruples, but first splits the graph into biconnected blocks: a
//! quadruple split by a cut vertex reduces to one with the far point
//! moved onto the cut vertex without changing its defect (every pairing
//! sum carries the detour term once), so the global constant is the
//! maximum over blocks. Trees collapse to edge blocks and cost nothing;
//! the O(m^4) scan only ever runs on the 2-connected cores.

use rayon::prelude::*;
use serde::Serialize;

use crate::arc::ArcPath;
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedMetricGraph};
use crate::metric::DistanceTable;
use crate::tolerances::{DELTA_GLOBAL_BLOCK_LIMIT, SLACK_ABS};

/// Gromov product (x|y)_p from a distance table.
#[inline]
pub fn gromov_product(d: &DistanceTable, p: NodeId, x: NodeId, y: NodeId) -> f64 {
    0.5 * (d.get(x, p) + d.get(y, p) - d.get(x, y))
}

/// Dense table of Gromov products (x|y)_base for all pairs.
#[derive(Debug, Clone)]
pub struct GromovProductTable {
    base: NodeId,
    n: usize,
    values: Vec<f64>,
}

impl GromovProductTable {
    pub fn compute(d: &DistanceTable, base: NodeId) -> Self {
        let n = d.n();
        let mut values = vec![0.0; n * n];
        for x in 0..n as NodeId {
            for y in x..n as NodeId {
                let v = gromov_product(d, base, x, y);
                values[x as usize * n + y as usize] = v;
                values[y as usize * n + x as usize] = v;
            }
        }
        Self { base, n, values }
    }

    pub fn base(&self) -> NodeId {
        self.base
    }

    #[inline]
    pub fn get(&self, x: NodeId, y: NodeId) -> f64 {
        self.values[x as usize * self.n + y as usize]
    }
}

/// Four-point defect min((x|y)_p, (y|z)_p) - (x|z)_p evaluated through a
/// distance callback. Used both by the scans and to recompute stored
/// witnesses.
pub fn four_point_defect<D>(dist: D, x: NodeId, y: NodeId, z: NodeId, p: NodeId) -> f64
where
    D: Fn(NodeId, NodeId) -> f64,
{
    let gp = |a: NodeId, b: NodeId| 0.5 * (dist(a, p) + dist(b, p) - dist(a, b));
    gp(x, y).min(gp(y, z)) - gp(x, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaMode {
    /// Triples against the graph base point: O(n^3).
    BasePoint,
    /// All base choices via the block scan.
    Global,
}

#[derive(Debug, Clone)]
pub struct DeltaOptions {
    /// Refuse the global scan when a biconnected block exceeds this many
    /// nodes (the scan is quartic in the block size).
    pub max_block_nodes: usize,
    /// Run anyway.
    pub force: bool,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            max_block_nodes: DELTA_GLOBAL_BLOCK_LIMIT,
            force: false,
        }
    }
}

/// Result of a hyperbolicity estimate. The witness quadruple (x, y, z, p)
/// reproduces `delta` exactly when its defect is recomputed.
#[derive(Debug, Clone, Serialize)]
pub struct HyperbolicityReport {
    pub mode: DeltaMode,
    pub delta: f64,
    pub witness: [NodeId; 4],
    /// Number of biconnected blocks large enough to scan (global mode).
    pub blocks_scanned: usize,
    pub largest_block: usize,
}

pub fn estimate_delta(g: &WeightedMetricGraph, mode: DeltaMode) -> Result<HyperbolicityReport> {
    estimate_delta_with(g, mode, &DeltaOptions::default())
}

pub fn estimate_delta_with(
    g: &WeightedMetricGraph,
    mode: DeltaMode,
    opts: &DeltaOptions,
) -> Result<HyperbolicityReport> {
    match mode {
        DeltaMode::BasePoint => {
            let table = DistanceTable::compute(g);
            let (delta, witness) = delta_base_with_table(&table, g.base());
            Ok(HyperbolicityReport {
                mode,
                delta,
                witness,
                blocks_scanned: 0,
                largest_block: 0,
            })
        }
        DeltaMode::Global => delta_global(g, opts),
    }
}

/// Base-point scan over ordered triples (x, y, z) with p fixed. The
/// defect is symmetric in (x, z), so only x <= z is visited; that
/// canonical ordering is also the lexicographically smaller witness.
pub fn delta_base_with_table(table: &DistanceTable, p: NodeId) -> (f64, [NodeId; 4]) {
    let n = table.n() as NodeId;
    let best = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut local = (f64::NEG_INFINITY, [0, 0, 0, 0]);
            for y in 0..n {
                let gxy = gromov_product(table, p, x, y);
                for z in x..n {
                    let defect = gxy.min(gromov_product(table, p, y, z))
                        - gromov_product(table, p, x, z);
                    if better(defect, [x, y, z, p], &local) {
                        local = (defect, [x, y, z, p]);
                    }
                }
            }
            local
        })
        .reduce(
            || (f64::NEG_INFINITY, [0, 0, 0, 0]),
            |a, b| if better(b.0, b.1, &a) { b } else { a },
        );
    if best.0 > 0.0 {
        best
    } else {
        (0.0, [p, p, p, p])
    }
}

/// Strictly better, or equal with a lexicographically smaller witness.
#[inline]
fn better(defect: f64, witness: [NodeId; 4], current: &(f64, [NodeId; 4])) -> bool {
    match defect.total_cmp(&current.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => witness < current.1,
        std::cmp::Ordering::Less => false,
    }
}

fn delta_global(g: &WeightedMetricGraph, opts: &DeltaOptions) -> Result<HyperbolicityReport> {
    let blocks = biconnected_blocks(g);
    let largest_block = blocks.iter().map(|b| b.len()).max().unwrap_or(0);
    let scannable: Vec<&Vec<NodeId>> = blocks.iter().filter(|b| b.len() >= 4).collect();
    if !opts.force && largest_block > opts.max_block_nodes {
        return Err(Error::SizeLimit(format!(
            "largest biconnected block has {largest_block} nodes (> {}); \
             the global scan is quartic - pass force to run anyway",
            opts.max_block_nodes
        )));
    }

    let mut best = (f64::NEG_INFINITY, [0, 0, 0, 0]);
    for block in &scannable {
        let cand = scan_block(g, block);
        if better(cand.0, cand.1, &best) {
            best = cand;
        }
    }
    let (delta, witness) = if best.0 > 0.0 {
        best
    } else {
        let b = g.base();
        (0.0, [b, b, b, b])
    };
    Ok(HyperbolicityReport {
        mode: DeltaMode::Global,
        delta,
        witness,
        blocks_scanned: scannable.len(),
        largest_block,
    })
}

/// Quadruple scan within one biconnected block. Works on the block-local
/// distance matrix (shortest paths between block nodes never leave the
/// block). For each 4-set the defect over all orderings is
/// (L - M)/2 with L >= M the two largest pairing sums; the witness
/// ordering is reconstructed from the maximal pairing.
fn scan_block(g: &WeightedMetricGraph, block: &[NodeId]) -> (f64, [NodeId; 4]) {
    let m = block.len();
    let local = block_distances(g, block);
    let d = |i: usize, j: usize| local[i * m + j];

    (0..m)
        .into_par_iter()
        .map(|a| {
            let mut bestl = (f64::NEG_INFINITY, [0, 0, 0, 0]);
            for b in (a + 1)..m {
                let dab = d(a, b);
                for c in (b + 1)..m {
                    let dac = d(a, c);
                    let dbc = d(b, c);
                    for e in (c + 1)..m {
                        let s1 = dab + d(c, e);
                        let s2 = dac + d(b, e);
                        let s3 = d(a, e) + dbc;
                        // Two largest of the three pairing sums.
                        let (l, mid, pairing) = top_two(s1, s2, s3);
                        let defect = 0.5 * (l - mid);
                        if defect >= bestl.0 {
                            let w = order_witness(block, [a, b, c, e], pairing);
                            if better(defect, w, &bestl) {
                                bestl = (defect, w);
                            }
                        }
                    }
                }
            }
            bestl
        })
        .reduce(
            || (f64::NEG_INFINITY, [0, 0, 0, 0]),
            |x, y| if better(y.0, y.1, &x) { y } else { x },
        )
}

/// Largest sum, second largest, and which pairing attains the largest
/// (0: ab|ce, 1: ac|be, 2: ae|bc). Ties take the lowest index, fixing
/// the witness deterministically.
#[inline]
fn top_two(s1: f64, s2: f64, s3: f64) -> (f64, f64, usize) {
    if s1 >= s2 {
        if s1 >= s3 {
            (s1, s2.max(s3), 0)
        } else {
            (s3, s1, 2)
        }
    } else if s2 >= s3 {
        (s2, s1.max(s3), 1)
    } else {
        (s3, s1.max(s2), 2)
    }
}

/// Build the ordered witness (x, y, z, p) whose Gromov defect equals
/// (L - M)/2: the pair split by the maximal pairing supplies (x, z), the
/// other pair (y, p). Of the equivalent orderings, return the smallest.
fn order_witness(block: &[NodeId], q: [usize; 4], pairing: usize) -> [NodeId; 4] {
    let [a, b, c, e] = q;
    let ((x1, z1), (y1, p1)) = match pairing {
        0 => ((a, b), (c, e)),
        1 => ((a, c), (b, e)),
        _ => ((a, e), (b, c)),
    };
    let mut best: Option<[NodeId; 4]> = None;
    for (x, z) in [(x1, z1), (z1, x1)] {
        for (y, p) in [(y1, p1), (p1, y1)] {
            for (pair_a, pair_b) in [((x, z), (y, p)), ((y, p), (x, z))] {
                let w = [
                    block[pair_a.0],
                    block[pair_b.0],
                    block[pair_a.1],
                    block[pair_b.1],
                ];
                if best.map_or(true, |cur| w < cur) {
                    best = Some(w);
                }
            }
        }
    }
    best.unwrap()
}

/// Dense distances inside one block, via Dijkstra restricted to the
/// block-induced subgraph.
fn block_distances(g: &WeightedMetricGraph, block: &[NodeId]) -> Vec<f64> {
    let m = block.len();
    let mut index = vec![usize::MAX; g.node_count()];
    for (i, &v) in block.iter().enumerate() {
        index[v as usize] = i;
    }
    let adj: Vec<Vec<(usize, f64)>> = block
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|&(w, len)| {
                    let j = index[w as usize];
                    (j != usize::MAX).then_some((j, len))
                })
                .collect()
        })
        .collect();

    let mut out = vec![f64::INFINITY; m * m];
    for s in 0..m {
        let row = &mut out[s * m..(s + 1) * m];
        let mut heap = std::collections::BinaryHeap::new();
        row[s] = 0.0;
        heap.push((std::cmp::Reverse(OrdF64(0.0)), s));
        while let Some((std::cmp::Reverse(OrdF64(cost)), u)) = heap.pop() {
            if cost > row[u] {
                continue;
            }
            for &(v, len) in &adj[u] {
                let c = cost + len;
                if c < row[v] {
                    row[v] = c;
                    heap.push((std::cmp::Reverse(OrdF64(c)), v));
                }
            }
        }
    }
    out
}

#[derive(PartialEq)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Biconnected blocks (vertex sets) by iterative Tarjan. Bridges come
/// out as 2-node blocks. The graph is connected by construction.
pub fn biconnected_blocks(g: &WeightedMetricGraph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    if n == 1 {
        return vec![vec![0]];
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![NodeId::MAX; n];
    let mut edge_stack: Vec<(NodeId, NodeId)> = Vec::new();
    let mut blocks = Vec::new();
    let mut timer = 0usize;

    // (node, index into its neighbor list)
    let mut stack: Vec<(NodeId, usize)> = vec![(0, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;

    while let Some(&mut (u, ref mut i)) = stack.last_mut() {
        let neighbors = g.neighbors(u);
        if *i < neighbors.len() {
            let (v, _) = neighbors[*i];
            *i += 1;
            if disc[v as usize] == usize::MAX {
                parent[v as usize] = u;
                disc[v as usize] = timer;
                low[v as usize] = timer;
                timer += 1;
                edge_stack.push((u, v));
                stack.push((v, 0));
            } else if v != parent[u as usize] && disc[v as usize] < disc[u as usize] {
                edge_stack.push((u, v));
                low[u as usize] = low[u as usize].min(disc[v as usize]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p as usize] = low[p as usize].min(low[u as usize]);
                if low[u as usize] >= disc[p as usize] {
                    // p is an articulation point for u's subtree: pop one block.
                    let mut verts = Vec::new();
                    while let Some(&(a, b)) = edge_stack.last() {
                        edge_stack.pop();
                        verts.push(a);
                        verts.push(b);
                        if (a, b) == (p, u) {
                            break;
                        }
                    }
                    verts.sort_unstable();
                    verts.dedup();
                    blocks.push(verts);
                }
            }
        }
    }
    blocks
}

/// Outcome of the tripod comparison: two h-short arcs from a common
/// endpoint stay within 4*delta + h (matched by distance) and
/// 4*delta + 2h (matched by length) of each other below the Gromov
/// product of their tips.
#[derive(Debug, Clone, Serialize)]
pub struct TripodCheck {
    pub gromov_product: f64,
    pub matched_points: usize,
    pub max_dist_by_distance: f64,
    pub max_dist_by_length: f64,
    pub bound_by_distance: f64,
    pub bound_by_length: f64,
    /// Worst mismatch between the requested and realized matching
    /// parameter (0 on aligned vertex sets).
    pub alignment_defect: f64,
    pub vacuous: bool,
    pub pass: bool,
}

pub fn verify_tripod(
    table: &DistanceTable,
    alpha1: &ArcPath,
    alpha2: &ArcPath,
    delta: f64,
    h: f64,
) -> Result<TripodCheck> {
    if alpha1.first() != alpha2.first() {
        return Err(Error::InvalidArc(
            "tripod arcs must share their first endpoint".into(),
        ));
    }
    let a = alpha1.first();
    let gp = gromov_product(table, a, alpha1.last(), alpha2.last());

    let d2: Vec<f64> = alpha2.nodes().iter().map(|&v| table.get(v, a)).collect();

    let mut matched = 0usize;
    let mut max_by_dist: f64 = 0.0;
    let mut max_by_len: f64 = 0.0;
    let mut align: f64 = 0.0;
    for (i, &x1) in alpha1.nodes().iter().enumerate() {
        let d1 = table.get(x1, a);
        if d1 > gp + SLACK_ABS {
            continue;
        }
        matched += 1;

        // x2: the point of alpha2 at the same metric distance from a.
        let mut j_best = 0;
        let mut gap = f64::INFINITY;
        for (j, &dj) in d2.iter().enumerate() {
            let e = (dj - d1).abs();
            if e < gap {
                gap = e;
                j_best = j;
            }
        }
        align = align.max(gap);
        max_by_dist = max_by_dist.max(table.get(x1, alpha2.nodes()[j_best]));

        // x2': the point of alpha2 at the same arclength parameter.
        let t = alpha1.params()[i];
        let j_len = alpha2.vertex_at_param(t);
        align = align.max((alpha2.params()[j_len] - t).abs());
        max_by_len = max_by_len.max(table.get(x1, alpha2.nodes()[j_len]));
    }

    let bound_by_distance = 4.0 * delta + h;
    let bound_by_length = 4.0 * delta + 2.0 * h;
    let vacuous = matched == 0;
    let pass = vacuous
        || (max_by_dist <= bound_by_distance + SLACK_ABS
            && max_by_len <= bound_by_length + SLACK_ABS);
    Ok(TripodCheck {
        gromov_product: gp,
        matched_points: matched,
        max_dist_by_distance: max_by_dist,
        max_dist_by_length: max_by_len,
        bound_by_distance,
        bound_by_length,
        alignment_defect: align,
        vacuous,
        pass,
    })
}

/// Outcome of the radial-growth comparison along an h-short arc: on the
/// early portion of the arc (before the point where the remaining
/// length equals (x|p)_y), the distance to `p` grows at the arc's own
/// rate up to a defect of 8*delta + 8h.
#[derive(Debug, Clone, Serialize)]
pub struct ArcGrowthCheck {
    pub segment_end: usize,
    pub pairs_checked: usize,
    pub min_slack: f64,
    pub witness: (NodeId, NodeId),
    pub pass: bool,
}

pub fn verify_arc_growth(
    table: &DistanceTable,
    arc: &ArcPath,
    p: NodeId,
    delta: f64,
    h: f64,
) -> Result<ArcGrowthCheck> {
    let (x, y) = (arc.first(), arc.last());
    if !arc.is_h_short(table.get(x, y), h) {
        return Err(Error::InvalidArc(format!(
            "arc of length {} is not {h}-short for endpoints at distance {}",
            arc.length(),
            table.get(x, y)
        )));
    }
    // Remaining length (x|p)_y from the far end marks the segment end.
    let tail = gromov_product(table, y, x, p);
    let end = arc.last_vertex_before(arc.length() - tail);

    let defect = 8.0 * delta + 8.0 * h;
    let mut min_slack = f64::INFINITY;
    let mut witness = (x, x);
    let mut pairs = 0usize;
    for zi in 0..=end {
        let z = arc.nodes()[zi];
        let dpz = table.get(p, z);
        for ui in 0..=zi {
            let u = arc.nodes()[ui];
            let slack = (table.get(p, u) - dpz) - (table.get(u, z) - defect);
            pairs += 1;
            if slack < min_slack {
                min_slack = slack;
                witness = (u, z);
            }
        }
    }
    Ok(ArcGrowthCheck {
        segment_end: end,
        pairs_checked: pairs,
        min_slack,
        witness,
        pass: min_slack >= -SLACK_ABS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, GraphMetadata};
    use crate::paths::shortest_arc;

    fn graph(n: usize, pairs: &[(NodeId, NodeId, f64)]) -> WeightedMetricGraph {
        let edges = pairs
            .iter()
            .map(|&(u, v, length)| Edge { u, v, length })
            .collect();
        WeightedMetricGraph::new(n, edges, 0, vec![], GraphMetadata::default()).unwrap()
    }

    fn star5() -> WeightedMetricGraph {
        graph(5, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)])
    }

    /// Brute-force oracle over all ordered quadruples on the full table.
    fn delta_oracle(table: &DistanceTable) -> f64 {
        let n = table.n() as NodeId;
        let mut best: f64 = 0.0;
        for p in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let defect =
                            four_point_defect(|a, b| table.get(a, b), x, y, z, p);
                        best = best.max(defect);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn gromov_product_identities() {
        let g = star5();
        let t = DistanceTable::compute(&g);
        // (x|y)_x = 0 and (x|x)_p = d(x, p).
        assert_eq!(gromov_product(&t, 1, 1, 2), 0.0);
        assert_eq!(gromov_product(&t, 0, 3, 3), 1.0);
        // Star center as base: leaves meet only at the center.
        assert_eq!(gromov_product(&t, 0, 1, 2), 0.0);
        let products = GromovProductTable::compute(&t, 0);
        for x in 0..5 {
            for y in 0..5 {
                let v = products.get(x, y);
                assert_eq!(v, products.get(y, x));
                assert!(v >= 0.0 && v <= t.get(x, 0).min(t.get(y, 0)) + 1e-12);
            }
        }
    }

    #[test]
    fn trees_are_zero_hyperbolic() {
        let g = graph(
            7,
            &[
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 3, 1.0),
                (1, 4, 1.0),
                (2, 5, 1.0),
                (2, 6, 1.0),
            ],
        );
        let r = estimate_delta(&g, DeltaMode::Global).unwrap();
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.largest_block, 2);
        let rb = estimate_delta(&g, DeltaMode::BasePoint).unwrap();
        assert_eq!(rb.delta, 0.0);
    }

    #[test]
    fn single_edge_is_zero() {
        let g = graph(2, &[(0, 1, 1.0)]);
        let r = estimate_delta(&g, DeltaMode::Global).unwrap();
        assert_eq!(r.delta, 0.0);
    }

    #[test]
    fn four_cycle_matches_oracle() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        let t = DistanceTable::compute(&g);
        let r = estimate_delta(&g, DeltaMode::Global).unwrap();
        assert_eq!(r.delta, delta_oracle(&t));
        assert_eq!(r.delta, 1.0);
        // Witness reproduces the value exactly.
        let [x, y, z, p] = r.witness;
        assert_eq!(four_point_defect(|a, b| t.get(a, b), x, y, z, p), r.delta);
    }

    #[test]
    fn blocks_of_two_joined_cycles() {
        // Two 4-cycles sharing node 0: the scan runs per block and still
        // matches the whole-graph oracle.
        let g = graph(
            7,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (0, 3, 1.0),
                (0, 4, 1.0),
                (4, 5, 1.0),
                (5, 6, 1.0),
                (0, 6, 1.0),
            ],
        );
        let blocks = biconnected_blocks(&g);
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.len() == 4));
        let t = DistanceTable::compute(&g);
        let r = estimate_delta(&g, DeltaMode::Global).unwrap();
        assert_eq!(r.delta, delta_oracle(&t));
        let [x, y, z, p] = r.witness;
        assert_eq!(four_point_defect(|a, b| t.get(a, b), x, y, z, p), r.delta);
    }

    #[test]
    fn base_point_below_global() {
        let g = graph(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (0, 5, 1.0),
                (1, 4, 2.0),
            ],
        );
        let global = estimate_delta(&g, DeltaMode::Global).unwrap().delta;
        let t = DistanceTable::compute(&g);
        for p in 0..6 {
            let (db, w) = delta_base_with_table(&t, p);
            assert!(db <= global + 1e-12, "base {p}: {db} > {global}");
            let [x, y, z, q] = w;
            assert_eq!(q, p);
            assert_eq!(
                four_point_defect(|a, b| t.get(a, b), x, y, z, q).max(0.0),
                db
            );
        }
    }

    #[test]
    fn size_gate_refuses_without_force() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        let opts = DeltaOptions {
            max_block_nodes: 3,
            force: false,
        };
        assert!(matches!(
            estimate_delta_with(&g, DeltaMode::Global, &opts),
            Err(Error::SizeLimit(_))
        ));
        let forced = estimate_delta_with(
            &g,
            DeltaMode::Global,
            &DeltaOptions {
                max_block_nodes: 3,
                force: true,
            },
        )
        .unwrap();
        assert_eq!(forced.delta, 1.0);
    }

    #[test]
    fn tripod_on_tree_is_tight() {
        // Arcs to two leaves share the segment to the median: both
        // maxima collapse to zero when delta = h = 0.
        let g = graph(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0)]);
        let t = DistanceTable::compute(&g);
        let a1 = shortest_arc(&g, 0, 3).unwrap();
        let a2 = shortest_arc(&g, 0, 4).unwrap();
        let c = verify_tripod(&t, &a1, &a2, 0.0, 0.0).unwrap();
        assert!(!c.vacuous);
        assert_eq!(c.gromov_product, 2.0);
        assert_eq!(c.max_dist_by_distance, 0.0);
        assert_eq!(c.max_dist_by_length, 0.0);
        assert!(c.pass);
    }

    #[test]
    fn tripod_on_four_cycle() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        let t = DistanceTable::compute(&g);
        let delta = estimate_delta(&g, DeltaMode::Global).unwrap().delta;
        // The two opposite-corner arcs, checked exhaustively.
        let arcs = crate::paths::h_short_arcs(&g, 0, 2, 0.0, 4).unwrap();
        assert_eq!(arcs.len(), 2);
        let c = verify_tripod(&t, &arcs[0], &arcs[1], delta, 0.0).unwrap();
        assert!(c.pass, "{c:?}");
    }

    #[test]
    fn arc_growth_on_tree() {
        let g = graph(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (2, 4, 1.0)]);
        let t = DistanceTable::compute(&g);
        // p on the arc: equality when u, z, p are colinear.
        let arc = shortest_arc(&g, 0, 3).unwrap();
        let c = verify_arc_growth(&t, &arc, 1, 0.0, 0.0).unwrap();
        assert!(c.pass);
        assert!(c.min_slack.abs() <= 1e-9);
        // p off the arc: slack stays nonnegative.
        let c2 = verify_arc_growth(&t, &arc, 4, 0.0, 0.0).unwrap();
        assert!(c2.pass);
        assert!(c2.min_slack >= -1e-9);
    }

    #[test]
    fn arc_growth_rejects_long_arc() {
        let g = graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]);
        let t = DistanceTable::compute(&g);
        let long_way = ArcPath::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert!(verify_arc_growth(&t, &long_way, 0, 0.0, 0.5).is_err());
    }
}
