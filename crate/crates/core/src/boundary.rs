//! Boundary machinery: roads, rough quasi-geodesics, the visual
//! comparison of deformed distances, and the frontier proxy metrics.
//!
//! Ideal boundary points are out of reach of a finite model; the
//! frontier nodes at the truncation radius stand in for them. The two
//! boundary metrics live on that proxy set: tau from Gromov products at
//! the origin, and theta as the shortest-chain closure of tau, which
//! gives the triangle inequality by construction and turns the
//! tau/2 <= theta <= tau sandwich into a measured claim.

use rayon::prelude::*;
use serde::Serialize;

use crate::arc::ArcPath;
use crate::deformation::{epsilon_policy, DeformedSpace, EpsilonPolicy};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedMetricGraph};
use crate::metric::{single_source, DistanceTable};
use crate::paths::shortest_arc_with_row;
use crate::tolerances::SLACK_ABS;

/// A finite road: shortest arcs from a common origin to stations at
/// increasing radii along one frontier direction. `mu` is the measured
/// length-map displacement; shortest arcs are h-short for h = 0.
#[derive(Debug, Clone)]
pub struct Road {
    arcs: Vec<ArcPath>,
    mu: f64,
    h: f64,
}

impl Road {
    pub fn arcs(&self) -> &[ArcPath] {
        &self.arcs
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> NodeId {
        self.arcs[0].first()
    }

    /// The theoretical displacement bound 4*delta + 2*h and whether the
    /// measured mu satisfies it.
    pub fn displacement_within(&self, delta: f64) -> (f64, bool) {
        let bound = 4.0 * delta + 2.0 * self.h;
        (bound, self.mu <= bound + SLACK_ABS)
    }
}

/// Build a road from `origin` towards the frontier node `direction`:
/// stations are the vertices of the shortest arc nearest the radii
/// i/stages * d(origin, direction), each reached by its own lex-minimal
/// shortest arc.
pub fn build_road(
    g: &WeightedMetricGraph,
    original: &DistanceTable,
    origin: NodeId,
    direction: NodeId,
    stages: usize,
) -> Result<Road> {
    if stages == 0 {
        return Err(Error::InvalidParameter("road needs >= 1 stage".into()));
    }
    if origin == direction {
        return Err(Error::InvalidParameter(
            "road direction must differ from the origin".into(),
        ));
    }
    let guide = shortest_arc_with_row(g, original.row(direction), origin, direction)?;
    let total = guide.length();

    let mut stations = Vec::with_capacity(stages);
    for i in 1..=stages {
        let target = total * i as f64 / stages as f64;
        let idx = guide.vertex_at_param(target);
        let u = guide.nodes()[idx];
        if u != origin && stations.last() != Some(&u) {
            stations.push(u);
        }
    }
    if stations.is_empty() {
        return Err(Error::InvalidParameter(
            "no stations at positive radius".into(),
        ));
    }

    let arcs: Vec<ArcPath> = stations
        .iter()
        .map(|&u| shortest_arc_with_row(g, original.row(u), origin, u))
        .collect::<Result<_>>()?;
    for w in arcs.windows(2) {
        if w[1].length() <= w[0].length() {
            return Err(Error::RoadViolation(format!(
                "arc lengths must strictly increase ({} then {})",
                w[0].length(),
                w[1].length()
            )));
        }
    }

    // Length-map displacement: match each vertex of the shorter arc to
    // the vertex of the longer arc at the nearest parameter.
    let mut mu: f64 = 0.0;
    for i in 0..arcs.len() {
        for j in (i + 1)..arcs.len() {
            for (a, &v) in arcs[i].nodes().iter().enumerate() {
                let t = arcs[i].params()[a];
                let b = arcs[j].vertex_at_param(t);
                mu = mu.max(original.get(v, arcs[j].nodes()[b]));
            }
        }
    }
    Ok(Road { arcs, mu, h: 0.0 })
}

/// A road concatenation: arc n, a connector to the length-map image of
/// its tip on arc m, then the tail of arc m.
#[derive(Debug, Clone, Serialize)]
pub struct RoadConcatenation {
    pub from_stage: usize,
    pub to_stage: usize,
    /// Connector length; at most mu + h when the road invariant holds.
    pub lambda: f64,
    #[serde(skip)]
    pub path: ArcPath,
}

pub fn concatenate_road_arcs(
    g: &WeightedMetricGraph,
    original: &DistanceTable,
    road: &Road,
    n: usize,
    m: usize,
) -> Result<RoadConcatenation> {
    if n > m || m >= road.arcs.len() {
        return Err(Error::InvalidParameter(format!(
            "invalid stage pair ({n}, {m}) for a road of {} arcs",
            road.arcs.len()
        )));
    }
    let alpha_n = &road.arcs[n];
    let alpha_m = &road.arcs[m];
    if n == m {
        return Ok(RoadConcatenation {
            from_stage: n,
            to_stage: m,
            lambda: 0.0,
            path: alpha_n.clone(),
        });
    }

    let tip = alpha_n.last();
    let join = alpha_m.vertex_at_param(alpha_n.length());
    let image = alpha_m.nodes()[join];
    let connector = shortest_arc_with_row(g, original.row(image), tip, image)?;
    let lambda = connector.length();
    if lambda > road.mu + road.h + SLACK_ABS {
        return Err(Error::RoadViolation(format!(
            "connector of length {lambda} exceeds mu + h = {}",
            road.mu + road.h
        )));
    }

    let mut nodes = alpha_n.nodes().to_vec();
    nodes.extend_from_slice(&connector.nodes()[1..]);
    nodes.extend_from_slice(&alpha_m.nodes()[join + 1..]);
    let path = ArcPath::new(g, nodes)?;
    Ok(RoadConcatenation {
        from_stage: n,
        to_stage: m,
        lambda,
        path,
    })
}

/// Rough quasi-geodesic defect of a parametrized path: the arclength
/// parameter dominates the metric from above with zero tolerance, and
/// `k_emp` is the worst defect |s-t| - d(gamma(s), gamma(t)).
#[derive(Debug, Clone, Serialize)]
pub struct RoughQuasiGeodesicCheck {
    pub vertex_pairs: usize,
    pub k_emp: f64,
    pub witness: (usize, usize),
    /// d <= |s-t| held for every pair, with zero tolerance.
    pub upper_ok: bool,
    pub max_upper_violation: f64,
}

pub fn verify_rough_quasi_geodesic(
    g: &WeightedMetricGraph,
    path: &ArcPath,
) -> Result<RoughQuasiGeodesicCheck> {
    let mut unique: Vec<NodeId> = path.nodes().to_vec();
    unique.sort_unstable();
    unique.dedup();
    let rows: Vec<Vec<f64>> = unique
        .par_iter()
        .map(|&u| single_source(g, u))
        .collect();
    let row_of = |v: NodeId| &rows[unique.binary_search(&v).unwrap()];

    let mut k_emp: f64 = 0.0;
    let mut witness = (0, 0);
    let mut max_upper_violation: f64 = 0.0;
    let mut pairs = 0usize;
    for s in 0..path.len() {
        let row = row_of(path.nodes()[s]);
        for t in (s + 1)..path.len() {
            pairs += 1;
            let span = path.params()[t] - path.params()[s];
            let d = row[path.nodes()[t] as usize];
            max_upper_violation = max_upper_violation.max(d - span);
            let defect = span - d;
            if defect > k_emp {
                k_emp = defect;
                witness = (s, t);
            }
        }
    }
    Ok(RoughQuasiGeodesicCheck {
        vertex_pairs: pairs,
        k_emp,
        witness,
        upper_ok: max_upper_violation <= 0.0,
        max_upper_violation,
    })
}

/// Per-pair entry of the visual comparison.
#[derive(Debug, Clone, Serialize)]
pub struct VisualRow {
    pub x: NodeId,
    pub y: NodeId,
    /// true when eps * d(x, y) <= 1/2
    pub small_branch: bool,
    pub ratio: f64,
}

/// Two-sided comparison of the deformed distance against the visual
/// quantity e^{-eps (x|y)_p} min(1/2, eps d(x, y)) / eps.
#[derive(Debug, Clone, Serialize)]
pub struct VisualComparison {
    pub pairs: usize,
    pub degenerate: usize,
    pub c_emp: f64,
    pub witness: (NodeId, NodeId),
    pub small_branch_pairs: usize,
    pub large_branch_pairs: usize,
    pub both_branches_populated: bool,
    pub policy: EpsilonPolicy,
    pub rows: Vec<VisualRow>,
}

pub fn check_visual_comparison(
    ds: &DeformedSpace,
    original: &DistanceTable,
    pairs: &[(NodeId, NodeId)],
    delta: f64,
) -> Result<VisualComparison> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("empty pair sample".into()));
    }
    let eps = ds.epsilon();
    let p = ds.graph().base();
    ds.deformed_table();

    let mut report = VisualComparison {
        pairs: 0,
        degenerate: 0,
        c_emp: 0.0,
        witness: (0, 0),
        small_branch_pairs: 0,
        large_branch_pairs: 0,
        both_branches_populated: false,
        policy: epsilon_policy(eps, delta),
        rows: Vec::with_capacity(pairs.len()),
    };
    for &(x, y) in pairs {
        if x == y {
            report.degenerate += 1;
            continue;
        }
        let d = original.get(x, y);
        let d_eps = ds.deformed_distance(x, y);
        if d_eps <= 0.0 {
            return Err(Error::InvalidGraph(format!(
                "deformed distance vanished for distinct nodes ({x}, {y})"
            )));
        }
        let product = crate::hyperbolicity::gromov_product(original, p, x, y);
        let small = eps * d <= 0.5;
        let visual = (-eps * product).exp() * (0.5f64).min(eps * d) / eps;
        let r = visual / d_eps;
        let two_sided = r.max(1.0 / r);
        report.pairs += 1;
        if small {
            report.small_branch_pairs += 1;
        } else {
            report.large_branch_pairs += 1;
        }
        if two_sided > report.c_emp {
            report.c_emp = two_sided;
            report.witness = (x, y);
        }
        report.rows.push(VisualRow {
            x,
            y,
            small_branch: small,
            ratio: r,
        });
    }
    report.both_branches_populated =
        report.small_branch_pairs > 0 && report.large_branch_pairs > 0;
    Ok(report)
}

/// The frontier proxy set with its two boundary metrics.
#[derive(Debug, Clone)]
pub struct BoundaryProxySet {
    origin: NodeId,
    proxies: Vec<NodeId>,
    tau: Vec<f64>,
    theta: Vec<f64>,
    policy: EpsilonPolicy,
    /// min over pairs of theta - tau/2
    min_lower_slack: f64,
    /// min over pairs of tau - theta
    min_upper_slack: f64,
}

impl BoundaryProxySet {
    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn proxies(&self) -> &[NodeId] {
        &self.proxies
    }

    pub fn len(&self) -> usize {
        self.proxies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proxies.is_empty()
    }

    /// tau by proxy index.
    pub fn tau(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.proxies.len() + j]
    }

    /// theta by proxy index.
    pub fn theta(&self, i: usize, j: usize) -> f64 {
        self.theta[i * self.proxies.len() + j]
    }

    pub fn policy(&self) -> EpsilonPolicy {
        self.policy
    }

    pub fn sandwich_slacks(&self) -> (f64, f64) {
        (self.min_lower_slack, self.min_upper_slack)
    }

    pub fn sandwich_ok(&self) -> bool {
        self.min_lower_slack >= -SLACK_ABS && self.min_upper_slack >= -SLACK_ABS
    }
}

/// Build tau and its chain closure theta on the frontier proxies.
/// Requires eps < min(1, 1/(5 delta)): the sandwich has no backing
/// otherwise and the construction refuses to pretend.
pub fn build_boundary_proxies(
    ds: &DeformedSpace,
    original: &DistanceTable,
    origin: NodeId,
    delta: f64,
) -> Result<BoundaryProxySet> {
    let g = ds.graph();
    if g.frontier().is_empty() {
        return Err(Error::EmptyFrontier);
    }
    let eps = ds.epsilon();
    let policy = epsilon_policy(eps, delta);
    if !policy.satisfied {
        return Err(Error::HypothesisViolated(format!(
            "epsilon = {eps} with delta = {delta} violates eps < min(1, 1/(5 delta)) = {}",
            policy.limit
        )));
    }

    let proxies: Vec<NodeId> = g.frontier().to_vec();
    let m = proxies.len();
    let mut tau = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = (-eps
                * crate::hyperbolicity::gromov_product(original, origin, proxies[i], proxies[j]))
            .exp();
            tau[i * m + j] = v;
            tau[j * m + i] = v;
        }
    }

    // Chain infimum: min-plus closure over the complete proxy graph.
    let mut theta = tau.clone();
    for k in 0..m {
        let row_k = theta[k * m..(k + 1) * m].to_vec();
        theta.par_chunks_mut(m).for_each(|row_i| {
            let via = row_i[k];
            for j in 0..m {
                let cand = via + row_k[j];
                if cand < row_i[j] {
                    row_i[j] = cand;
                }
            }
        });
    }

    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    for i in 0..m {
        for j in 0..m {
            let (t, th) = (tau[i * m + j], theta[i * m + j]);
            min_lower = min_lower.min(th - 0.5 * t);
            min_upper = min_upper.min(t - th);
        }
    }
    Ok(BoundaryProxySet {
        origin,
        proxies,
        tau,
        theta,
        policy,
        min_lower_slack: min_lower,
        min_upper_slack: min_upper,
    })
}

/// Comparison of theta against the deformed metric on the proxies.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiIsometryCheck {
    pub proxy_pairs: usize,
    pub m_emp: f64,
    pub witness: (NodeId, NodeId),
    pub finite: bool,
}

pub fn check_boundary_quasi_isometry(
    ds: &DeformedSpace,
    proxies: &BoundaryProxySet,
) -> Result<QuasiIsometryCheck> {
    let m = proxies.len();
    if m < 2 {
        return Err(Error::InvalidParameter(
            "need at least 2 proxies for a quasi-isometry estimate".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = proxies
        .proxies()
        .par_iter()
        .map(|&u| ds.deformed_row(u))
        .collect();

    let mut m_emp: f64 = 0.0;
    let mut witness = (proxies.proxies()[0], proxies.proxies()[1]);
    let mut pairs = 0usize;
    for i in 0..m {
        for j in (i + 1)..m {
            pairs += 1;
            let d_eps = rows[i][proxies.proxies()[j] as usize];
            let th = proxies.theta(i, j);
            let ratio = (th / d_eps).max(d_eps / th);
            if ratio > m_emp {
                m_emp = ratio;
                witness = (proxies.proxies()[i], proxies.proxies()[j]);
            }
        }
    }
    Ok(QuasiIsometryCheck {
        proxy_pairs: pairs,
        m_emp,
        witness,
        finite: m_emp.is_finite(),
    })
}

/// Behaviour of two outward vertex sequences under the deformation:
/// Gromov products within each ray must grow, and the cross products
/// decide equivalence, which the deformed gaps must reflect.
#[derive(Debug, Clone, Serialize)]
pub struct GromovCauchyCheck {
    pub stages: usize,
    pub within_ray_products_nondecreasing: bool,
    pub cross_products: Vec<f64>,
    pub deformed_gaps: Vec<f64>,
    pub gaps_nonincreasing: bool,
    pub classified_equivalent: bool,
    /// d_eps(u_n, v_n) <= C e^{-eps (u_n|v_n)} min(1/2, eps d)/eps with
    /// the supplied constant; a consistency echo of the visual bound.
    pub consistent_with_constant: Option<bool>,
}

pub fn check_gromov_to_cauchy(
    ds: &DeformedSpace,
    original: &DistanceTable,
    ray_u: &[NodeId],
    ray_v: &[NodeId],
    comparison_constant: Option<f64>,
) -> Result<GromovCauchyCheck> {
    if ray_u.len() < 3 || ray_v.len() < 3 {
        return Err(Error::InvalidParameter(
            "rays must have at least 3 stages".into(),
        ));
    }
    let o = ds.graph().base();
    let eps = ds.epsilon();
    let stages = ray_u.len().min(ray_v.len());

    let nondecreasing = |ray: &[NodeId]| {
        ray.windows(2)
            .map(|w| crate::hyperbolicity::gromov_product(original, o, w[0], w[1]))
            .collect::<Vec<f64>>()
            .windows(2)
            .all(|w| w[1] >= w[0] - SLACK_ABS)
    };
    let within_ok = nondecreasing(&ray_u[..stages]) && nondecreasing(&ray_v[..stages]);

    let mut cross_products = Vec::with_capacity(stages);
    let mut deformed_gaps = Vec::with_capacity(stages);
    let mut consistent = comparison_constant.map(|_| true);
    for n in 0..stages {
        let (u, v) = (ray_u[n], ray_v[n]);
        let product = crate::hyperbolicity::gromov_product(original, o, u, v);
        let gap = if u == v {
            0.0
        } else {
            ds.deformed_row(u)[v as usize]
        };
        if let (Some(c), Some(ok)) = (comparison_constant, consistent.as_mut()) {
            let bound = c * (-eps * product).exp() * (0.5f64).min(eps * original.get(u, v)) / eps;
            if u != v && gap > bound + SLACK_ABS {
                *ok = false;
            }
        }
        cross_products.push(product);
        deformed_gaps.push(gap);
    }

    let gaps_nonincreasing = deformed_gaps
        .windows(2)
        .all(|w| w[1] <= w[0] + SLACK_ABS);
    // Equivalent sequences keep gaining product to the very end;
    // split rays plateau at the branch point.
    let k = stages - 1;
    let classified_equivalent = cross_products[k] > cross_products[k - 2] + SLACK_ABS;

    Ok(GromovCauchyCheck {
        stages,
        within_ray_products_nondecreasing: within_ok,
        cross_products,
        deformed_gaps,
        gaps_nonincreasing,
        classified_equivalent,
        consistent_with_constant: consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{deform, DeformationParams, Quadrature};
    use crate::generators::{generate, GeneratorKind, GeneratorSpec};
    use crate::graph::{Edge, GraphMetadata};
    use crate::paths::shortest_arc;

    fn binary_tree(radius: u32) -> WeightedMetricGraph {
        generate(&GeneratorSpec::new(GeneratorKind::RegularTree {
            branching: 2,
            radius,
        }))
        .unwrap()
    }

    fn tiling(rings: u32) -> WeightedMetricGraph {
        generate(&GeneratorSpec::new(GeneratorKind::HyperbolicTiling {
            p: 7,
            q: 3,
            rings,
        }))
        .unwrap()
    }

    #[test]
    fn tree_road_is_exact() {
        let g = binary_tree(6);
        let t = DistanceTable::compute(&g);
        let leaf = *g.frontier().first().unwrap();
        let road = build_road(&g, &t, 0, leaf, 6).unwrap();
        assert_eq!(road.mu(), 0.0);
        assert_eq!(road.arcs().len(), 6);
        let (_, ok) = road.displacement_within(0.0);
        assert!(ok);
    }

    #[test]
    fn single_stage_road() {
        let g = binary_tree(4);
        let t = DistanceTable::compute(&g);
        let leaf = *g.frontier().first().unwrap();
        let road = build_road(&g, &t, 0, leaf, 1).unwrap();
        assert_eq!(road.arcs().len(), 1);
        assert_eq!(road.mu(), 0.0);
    }

    #[test]
    fn tiling_road_respects_tripod_bound() {
        use crate::hyperbolicity::{estimate_delta, DeltaMode};
        let g = tiling(4);
        let t = DistanceTable::compute(&g);
        let delta = estimate_delta(&g, DeltaMode::Global).unwrap().delta;
        let f = *g.frontier().last().unwrap();
        let road = build_road(&g, &t, 0, f, 4).unwrap();
        let (bound, ok) = road.displacement_within(delta);
        assert!(ok, "mu = {} > {bound}", road.mu());
    }

    #[test]
    fn tree_concatenation_collapses() {
        let g = binary_tree(6);
        let t = DistanceTable::compute(&g);
        let leaf = *g.frontier().first().unwrap();
        let road = build_road(&g, &t, 0, leaf, 6).unwrap();
        let c = concatenate_road_arcs(&g, &t, &road, 1, 4).unwrap();
        assert_eq!(c.lambda, 0.0);
        assert_eq!(c.path.nodes(), road.arcs()[4].nodes());
        let same = concatenate_road_arcs(&g, &t, &road, 2, 2).unwrap();
        assert_eq!(same.path.nodes(), road.arcs()[2].nodes());
    }

    #[test]
    fn concatenation_is_rough_quasi_geodesic() {
        let g = tiling(4);
        let t = DistanceTable::compute(&g);
        let f = *g.frontier().last().unwrap();
        let road = build_road(&g, &t, 0, f, 4).unwrap();
        for n in 0..road.arcs().len() {
            for m in n..road.arcs().len() {
                let c = concatenate_road_arcs(&g, &t, &road, n, m).unwrap();
                let check = verify_rough_quasi_geodesic(&g, &c.path).unwrap();
                assert!(check.upper_ok);
                let k_bound = 3.0 * road.mu() + 3.0 * road.h();
                assert!(
                    check.k_emp <= k_bound + SLACK_ABS,
                    "stages ({n}, {m}): k = {} > {k_bound}",
                    check.k_emp
                );
            }
        }
    }

    #[test]
    fn shortest_arcs_have_zero_defect() {
        let g = tiling(3);
        let f = *g.frontier().first().unwrap();
        let arc = shortest_arc(&g, 0, f).unwrap();
        let check = verify_rough_quasi_geodesic(&g, &arc).unwrap();
        assert_eq!(check.k_emp, 0.0);
        assert!(check.upper_ok);
    }

    #[test]
    fn visual_comparison_on_tree() {
        let g = binary_tree(8);
        let params = DeformationParams::new(0.5)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds = deform(&g, params).unwrap();
        let t = DistanceTable::compute(&g);
        let inner: Vec<NodeId> = g.nodes().filter(|&x| ds.base_distance(x) <= 4.0).collect();
        let pairs = crate::sampling::all_pairs(&inner);
        let rep = check_visual_comparison(&ds, &t, &pairs, 0.0).unwrap();
        assert!(rep.c_emp.is_finite());
        assert!(rep.both_branches_populated, "{rep:?}");
        assert!(rep.policy.satisfied);
        // Closed form on an exact tree: the worst two-sided ratio over
        // inner pairs is attained at deep pairs with a shallow meet.
        let s = 0.5 * 4.0;
        let want = (2.0 * (1.0 - (-s as f64).exp())) / 0.5;
        assert!((rep.c_emp - want).abs() <= 1e-9, "{} vs {want}", rep.c_emp);
    }

    #[test]
    fn visual_branch_boundary_is_continuous() {
        // eps * d = 1/2 exactly: both branch formulas coincide.
        let d = 1.0;
        let eps = 0.5;
        let small = (0.5f64).min(eps * d);
        assert_eq!(small, eps * d);
    }

    #[test]
    fn visual_ratios_scale_invariant() {
        let g = binary_tree(6);
        let params = DeformationParams::new(0.5)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds = deform(&g, params).unwrap();
        let t = DistanceTable::compute(&g);
        let pairs = crate::sampling::sample_pairs(&g, &Default::default());
        let rep = check_visual_comparison(&ds, &t, &pairs, 0.0).unwrap();

        // Doubled lengths, halved epsilon: every ratio is unchanged.
        let spec = GeneratorSpec::new(GeneratorKind::RegularTree {
            branching: 2,
            radius: 6,
        })
        .with_edge_length(2.0);
        let g2 = generate(&spec).unwrap();
        let params2 = DeformationParams::new(0.25)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds2 = deform(&g2, params2).unwrap();
        let t2 = DistanceTable::compute(&g2);
        let rep2 = check_visual_comparison(&ds2, &t2, &pairs, 0.0).unwrap();
        assert_eq!(rep.c_emp, rep2.c_emp);
        for (a, b) in rep.rows.iter().zip(rep2.rows.iter()) {
            assert_eq!(a.ratio, b.ratio, "pair ({}, {})", a.x, a.y);
        }
    }

    #[test]
    fn proxies_sandwich_on_tree() {
        let g = binary_tree(6);
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        let proxies = build_boundary_proxies(&ds, &t, 0, 0.0).unwrap();
        assert!(proxies.sandwich_ok());
        assert_eq!(proxies.len(), 64);
        // tau is symmetric, bounded by 1, positive on the diagonal.
        for i in 0..proxies.len() {
            assert!(proxies.tau(i, i) > 0.0);
            for j in 0..proxies.len() {
                assert_eq!(proxies.tau(i, j), proxies.tau(j, i));
                assert!(proxies.tau(i, j) <= 1.0);
                assert!(proxies.theta(i, j) <= proxies.tau(i, j) + 1e-15);
            }
        }
    }

    #[test]
    fn theta_triangle_inequality() {
        let g = tiling(3);
        let ds = deform(&g, DeformationParams::new(0.05).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        let proxies = build_boundary_proxies(&ds, &t, 0, 1.0).unwrap();
        let m = proxies.len();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    assert!(
                        proxies.theta(i, j)
                            <= proxies.theta(i, k) + proxies.theta(k, j) + 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn proxies_two_nodes_theta_equals_tau() {
        // Path graph with two endpoints as frontier: no chains to take.
        let g = WeightedMetricGraph::new(
            3,
            vec![
                Edge {
                    u: 0,
                    v: 1,
                    length: 1.0,
                },
                Edge {
                    u: 1,
                    v: 2,
                    length: 1.0,
                },
            ],
            1,
            vec![0, 2],
            GraphMetadata::default(),
        )
        .unwrap();
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        let proxies = build_boundary_proxies(&ds, &t, 1, 0.0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(proxies.theta(i, j), proxies.tau(i, j));
            }
        }
    }

    #[test]
    fn proxies_refuse_violated_hypothesis() {
        let g = binary_tree(4);
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        // delta large enough that 1/(5 delta) < 0.5.
        assert!(matches!(
            build_boundary_proxies(&ds, &t, 0, 1.0),
            Err(Error::HypothesisViolated(_))
        ));
        // epsilon >= 1 fails even for delta = 0.
        let ds1 = deform(&g, DeformationParams::new(1.0).unwrap()).unwrap();
        assert!(matches!(
            build_boundary_proxies(&ds1, &t, 0, 0.0),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn quasi_isometry_on_path_antipodes() {
        // Two antipodal frontier nodes on a path: a single proxy pair,
        // computable by hand.
        let g = WeightedMetricGraph::new(
            5,
            (0..4)
                .map(|i| Edge {
                    u: i,
                    v: i + 1,
                    length: 1.0,
                })
                .collect(),
            2,
            vec![0, 4],
            GraphMetadata::default(),
        )
        .unwrap();
        let eps = 0.5;
        let params = DeformationParams::new(eps)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds = deform(&g, params).unwrap();
        let t = DistanceTable::compute(&g);
        let proxies = build_boundary_proxies(&ds, &t, 2, 0.0).unwrap();
        let qi = check_boundary_quasi_isometry(&ds, &proxies).unwrap();
        assert_eq!(qi.proxy_pairs, 1);
        // theta = tau = e^0 = 1 ((0|4)_2 = 0); d_eps = 2 * (1 - e^-1)/eps.
        let d_eps = 2.0 * (1.0 - (-1.0f64).exp()) / eps;
        let want = d_eps.max(1.0 / d_eps);
        assert!((qi.m_emp - want).abs() <= 1e-12);
        assert!(qi.finite);
    }

    #[test]
    fn quasi_isometry_needs_two_proxies() {
        let g = WeightedMetricGraph::new(
            2,
            vec![Edge {
                u: 0,
                v: 1,
                length: 1.0,
            }],
            0,
            vec![1],
            GraphMetadata::default(),
        )
        .unwrap();
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        let proxies = build_boundary_proxies(&ds, &t, 0, 0.0).unwrap();
        assert!(check_boundary_quasi_isometry(&ds, &proxies).is_err());
    }

    #[test]
    fn shifted_ray_pair_is_equivalent() {
        let g = binary_tree(8);
        let params = DeformationParams::new(0.5)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds = deform(&g, params).unwrap();
        let t = DistanceTable::compute(&g);
        let leaf = *g.frontier().first().unwrap();
        let ray = shortest_arc(&g, 0, leaf).unwrap();
        let u: Vec<NodeId> = ray.nodes().to_vec();
        let v: Vec<NodeId> = ray.nodes()[1..].to_vec();
        let c = check_gromov_to_cauchy(&ds, &t, &u[..v.len()], &v, None).unwrap();
        assert!(c.within_ray_products_nondecreasing);
        assert!(c.classified_equivalent, "{c:?}");
        assert!(c.gaps_nonincreasing, "{c:?}");
        assert!(c.deformed_gaps.last().unwrap() < &c.deformed_gaps[0]);
    }

    #[test]
    fn sibling_rays_split_at_depth_three() {
        let g = binary_tree(8);
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        // Two leaves whose paths agree for exactly 3 edges.
        let leaf_a = *g.frontier().first().unwrap();
        let ray_a = shortest_arc(&g, 0, leaf_a).unwrap();
        let split = ray_a.nodes()[3];
        let other_child = g
            .neighbors(split)
            .iter()
            .map(|&(v, _)| v)
            .find(|&v| v != ray_a.nodes()[2] && v != ray_a.nodes()[4])
            .unwrap();
        let mut cursor = other_child;
        loop {
            let next = g
                .neighbors(cursor)
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| v > cursor)
                .min();
            match next {
                Some(v) => cursor = v,
                None => break,
            }
        }
        let ray_b = shortest_arc(&g, 0, cursor).unwrap();
        let c = check_gromov_to_cauchy(
            &ds,
            &t,
            ray_a.nodes(),
            ray_b.nodes(),
            None,
        )
        .unwrap();
        assert!(!c.classified_equivalent, "{c:?}");
        // The cross products plateau at the split depth.
        assert_eq!(*c.cross_products.last().unwrap(), 3.0);
        assert!(*c.deformed_gaps.last().unwrap() > 0.0);
    }

    #[test]
    fn same_ray_twice_has_zero_gaps() {
        let g = binary_tree(6);
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let t = DistanceTable::compute(&g);
        let leaf = *g.frontier().first().unwrap();
        let ray = shortest_arc(&g, 0, leaf).unwrap();
        let c =
            check_gromov_to_cauchy(&ds, &t, ray.nodes(), ray.nodes(), Some(4.0)).unwrap();
        assert!(c.deformed_gaps.iter().all(|&g| g == 0.0));
        assert_eq!(c.consistent_with_constant, Some(true));
        // Short rays rejected.
        assert!(check_gromov_to_cauchy(&ds, &t, &ray.nodes()[..2], ray.nodes(), None).is_err());
    }
}
