//! Conformal deformation of a metric graph.
//!
//! The density exp(-eps * d(x, base)) reweights every edge; deformed
//! distances are shortest paths over the reweighted graph. Two edge
//! quadratures are available: the trapezoid rule on endpoint densities
//! (generator-agnostic) and an exact integral for edges along which the
//! distance to the base is affine (always true on trees), used to anchor
//! accuracy tests.
//!
//! All checks report slack rather than panicking, so a violated bound
//! shows up as a failed check record with a witness.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::arc::ArcPath;
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedMetricGraph};
use crate::metric::{multi_source, single_source, DistanceTable};
use crate::tolerances::{DEFAULT_H, SLACK_ABS, SLACK_LOG};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quadrature {
    /// length * (rho(u) + rho(v)) / 2 per edge.
    Trapezoid,
    /// Exact integral of the density along radially affine edges;
    /// rejects edges where |d(u,p) - d(v,p)| != length.
    ExactTree,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeformationParams {
    pub epsilon: f64,
    /// h-short slack used by downstream arc selections.
    pub h: f64,
    pub quadrature: Quadrature,
}

impl DeformationParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            h: DEFAULT_H,
            quadrature: Quadrature::Trapezoid,
        })
    }

    pub fn with_h(mut self, h: f64) -> Result<Self> {
        if h < 0.0 || !h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "h must be nonnegative, got {h}"
            )));
        }
        self.h = h;
        Ok(self)
    }

    pub fn with_quadrature(mut self, quadrature: Quadrature) -> Self {
        self.quadrature = quadrature;
        self
    }
}

/// Record of the epsilon admissibility bound eps < min(1, 1/(5 delta))
/// against a measured delta. Boundary-metric constructions require
/// `satisfied`; deformation-level checks run for any positive epsilon.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EpsilonPolicy {
    pub epsilon: f64,
    pub delta: f64,
    pub limit: f64,
    pub satisfied: bool,
}

pub fn epsilon_policy(epsilon: f64, delta: f64) -> EpsilonPolicy {
    let limit = if delta > 0.0 {
        (1.0 / (5.0 * delta)).min(1.0)
    } else {
        1.0
    };
    EpsilonPolicy {
        epsilon,
        delta,
        limit,
        satisfied: epsilon < limit,
    }
}

/// A graph together with its conformal deformation.
pub struct DeformedSpace {
    graph: WeightedMetricGraph,
    params: DeformationParams,
    base_distance: Vec<f64>,
    density: Vec<f64>,
    deformed: WeightedMetricGraph,
    /// Deformed distance to the nearest frontier node, for every node.
    frontier_deformed: Option<Vec<f64>>,
    /// Smallest original distance from the base to the frontier.
    frontier_radius: Option<f64>,
    table: OnceLock<DistanceTable>,
}

pub fn deform(g: &WeightedMetricGraph, params: DeformationParams) -> Result<DeformedSpace> {
    let eps = params.epsilon;
    let base_distance = single_source(g, g.base());
    let density: Vec<f64> = base_distance.iter().map(|&d| (-eps * d).exp()).collect();

    let mut bad_edge: Option<String> = None;
    let deformed = g.reweighted(|e| {
        let (du, dv) = (base_distance[e.u as usize], base_distance[e.v as usize]);
        match params.quadrature {
            Quadrature::Trapezoid => {
                e.length * 0.5 * (density[e.u as usize] + density[e.v as usize])
            }
            Quadrature::ExactTree => {
                if ((du - dv).abs() - e.length).abs() > SLACK_ABS {
                    bad_edge.get_or_insert_with(|| {
                        format!(
                            "edge ({}, {}) is not radially affine: |{du} - {dv}| != {}",
                            e.u, e.v, e.length
                        )
                    });
                    e.length // placeholder; construction is aborted below
                } else {
                    let near = du.min(dv);
                    // rho(near) * (1 - exp(-eps * len)) / eps, via expm1
                    // to stay accurate for small eps.
                    (-eps * near).exp() * (-(-eps * e.length).exp_m1()) / eps
                }
            }
        }
    })?;
    if let Some(msg) = bad_edge {
        return Err(Error::InvalidParameter(format!(
            "exact-tree quadrature: {msg}"
        )));
    }

    let (frontier_deformed, frontier_radius) = if g.frontier().is_empty() {
        (None, None)
    } else {
        let fd = multi_source(&deformed, g.frontier());
        let r = g
            .frontier()
            .iter()
            .map(|&f| base_distance[f as usize])
            .fold(f64::INFINITY, f64::min);
        (Some(fd), Some(r))
    };

    Ok(DeformedSpace {
        graph: g.clone(),
        params,
        base_distance,
        density,
        deformed,
        frontier_deformed,
        frontier_radius,
        table: OnceLock::new(),
    })
}

impl DeformedSpace {
    pub fn graph(&self) -> &WeightedMetricGraph {
        &self.graph
    }

    pub fn deformed_graph(&self) -> &WeightedMetricGraph {
        &self.deformed
    }

    pub fn params(&self) -> &DeformationParams {
        &self.params
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    pub fn density(&self, x: NodeId) -> f64 {
        self.density[x as usize]
    }

    /// log density, exactly -eps * d(x, base).
    pub fn log_density(&self, x: NodeId) -> f64 {
        -self.params.epsilon * self.base_distance[x as usize]
    }

    /// Original distance from the base point.
    pub fn base_distance(&self, x: NodeId) -> f64 {
        self.base_distance[x as usize]
    }

    /// Smallest original distance from the base to the frontier.
    pub fn frontier_radius(&self) -> Option<f64> {
        self.frontier_radius
    }

    /// Deformed distances from `x` to every node (one Dijkstra; no table
    /// required).
    pub fn deformed_row(&self, x: NodeId) -> Vec<f64> {
        single_source(&self.deformed, x)
    }

    /// Dense deformed distance table, materialized on first use.
    pub fn deformed_table(&self) -> &DistanceTable {
        self.table
            .get_or_init(|| DistanceTable::compute(&self.deformed))
    }

    pub fn deformed_distance(&self, x: NodeId, y: NodeId) -> f64 {
        self.deformed_table().get(x, y)
    }

    /// Deformed length of an arc of the original graph: the sum of the
    /// deformed edge weights along it, accumulated in arc order.
    pub fn deformed_arc_length(&self, arc: &ArcPath) -> f64 {
        let mut total = 0.0;
        for w in arc.nodes().windows(2) {
            total += self
                .deformed
                .edge_length(w[0], w[1])
                .expect("arc validated against the same topology");
        }
        total
    }

    /// Certified bracket for the deformed distance from `x` to the
    /// boundary of the untruncated space: the frontier minimum is a
    /// lower bound (every escaping curve crosses the frontier), and the
    /// geometric tail beyond the truncation radius certifies the upper
    /// bound.
    pub fn boundary_distance(&self, x: NodeId) -> Result<(f64, f64)> {
        let fd = self
            .frontier_deformed
            .as_ref()
            .ok_or(Error::EmptyFrontier)?;
        let lower = fd[x as usize];
        let eps = self.params.epsilon;
        let tail = (-eps * self.frontier_radius.unwrap()).exp() / eps;
        Ok((lower, lower + tail))
    }
}

/// Two-sided density ratio bound: for all pairs,
/// exp(-eps d(x,y)) <= rho(x)/rho(y) <= exp(eps d(x,y)).
/// Verified in log space, where the slack is exactly
/// eps * (d(x,y) - |d(x,p) - d(y,p)|).
#[derive(Debug, Clone, Serialize)]
pub struct HarnackCheck {
    pub pairs: usize,
    pub min_log_slack: f64,
    pub witness: (NodeId, NodeId),
    pub pass: bool,
}

pub fn check_harnack(ds: &DeformedSpace) -> HarnackCheck {
    let g = &ds.graph;
    let n = g.node_count();
    let eps = ds.params.epsilon;
    let best = (0..n as NodeId)
        .into_par_iter()
        .map(|x| {
            let row = single_source(g, x);
            let dx = ds.base_distance[x as usize];
            let mut local = (f64::INFINITY, (x, x));
            for y in (x + 1)..n as NodeId {
                let slack = row[y as usize] - (dx - ds.base_distance[y as usize]).abs();
                if slack < local.0 || (slack == local.0 && (x, y) < local.1) {
                    local = (slack, (x, y));
                }
            }
            local
        })
        .reduce(
            || (f64::INFINITY, (NodeId::MAX, NodeId::MAX)),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let min_log_slack = if n > 1 { eps * best.0 } else { 0.0 };
    HarnackCheck {
        pairs: n * (n - 1) / 2,
        min_log_slack,
        witness: if n > 1 { best.1 } else { (0, 0) },
        pass: min_log_slack >= -SLACK_LOG,
    }
}

/// Deformed diameter against the bound 2 e^eps / eps.
#[derive(Debug, Clone, Serialize)]
pub struct DiameterCheck {
    pub diameter: f64,
    pub witness: (NodeId, NodeId),
    pub bound: f64,
    pub pass: bool,
}

pub fn check_diameter(ds: &DeformedSpace) -> DiameterCheck {
    let n = ds.graph.node_count();
    let best = (0..n as NodeId)
        .into_par_iter()
        .map(|x| {
            let row = ds.deformed_row(x);
            let mut local = (0.0f64, (x, x));
            for y in (x + 1)..n as NodeId {
                let d = row[y as usize];
                if d > local.0 || (d == local.0 && (x, y) < local.1) {
                    local = (d, (x, y));
                }
            }
            local
        })
        .reduce(
            || (0.0, (NodeId::MAX, NodeId::MAX)),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let eps = ds.params.epsilon;
    let bound = 2.0 * eps.exp() / eps;
    DiameterCheck {
        diameter: best.0,
        witness: best.1,
        bound,
        pass: best.0 <= bound + SLACK_ABS,
    }
}

/// The identity map is locally bilipschitz: inside the unit ball at `w`,
/// e^{-5 eps} rho(w) d(x,y) <= d_eps(x,y) <= 2 e^{5 eps} rho(w) d(x,y).
#[derive(Debug, Clone, Serialize)]
pub struct BilipschitzCheck {
    pub center: NodeId,
    pub ball_size: usize,
    pub min_lower_slack: f64,
    pub min_upper_slack: f64,
    pub vacuous: bool,
    pub pass: bool,
}

pub fn check_local_bilipschitz(ds: &DeformedSpace, w: NodeId) -> BilipschitzCheck {
    let g = &ds.graph;
    let from_w = single_source(g, w);
    let ball: Vec<NodeId> = (0..g.node_count() as NodeId)
        .filter(|&x| from_w[x as usize] < 1.0)
        .collect();
    let eps = ds.params.epsilon;
    let rho_w = ds.density(w);
    let lo = (-5.0 * eps).exp() * rho_w;
    let hi = 2.0 * (5.0 * eps).exp() * rho_w;

    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    let mut compared = false;
    for &x in &ball {
        let orig = single_source(g, x);
        let def = ds.deformed_row(x);
        for &y in &ball {
            if y <= x {
                continue;
            }
            compared = true;
            let d = orig[y as usize];
            let de = def[y as usize];
            min_lower = min_lower.min(de - lo * d);
            min_upper = min_upper.min(hi * d - de);
        }
    }
    let vacuous = !compared;
    BilipschitzCheck {
        center: w,
        ball_size: ball.len(),
        min_lower_slack: if vacuous { 0.0 } else { min_lower },
        min_upper_slack: if vacuous { 0.0 } else { min_upper },
        vacuous,
        pass: vacuous || (min_lower >= -SLACK_ABS && min_upper >= -SLACK_ABS),
    }
}

/// Per-node verdict for the boundary lower bound
/// d_eps(x, boundary) >= rho(x) / (e * eps), tested on inner nodes
/// (original distance to the base at most half the frontier radius).
/// The frontier bracket decides each node: lower >= bound certifies the
/// claim, upper < bound would certify a violation, anything else means
/// the truncation is too short to decide.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryBoundCheck {
    pub inner_nodes: usize,
    pub certified: usize,
    pub indeterminate: usize,
    pub violations: usize,
    pub min_certified_margin: f64,
    pub worst_node: NodeId,
    /// No violations anywhere.
    pub pass: bool,
    /// Every inner node certified (truncation deep enough for this eps).
    pub conclusive: bool,
}

pub fn check_boundary_bound(ds: &DeformedSpace) -> Result<BoundaryBoundCheck> {
    let fd = ds
        .frontier_deformed
        .as_ref()
        .ok_or(Error::EmptyFrontier)?;
    let eps = ds.params.epsilon;
    let half = ds.frontier_radius.unwrap() / 2.0;
    let tail = (-eps * ds.frontier_radius.unwrap()).exp() / eps;

    let mut check = BoundaryBoundCheck {
        inner_nodes: 0,
        certified: 0,
        indeterminate: 0,
        violations: 0,
        min_certified_margin: f64::INFINITY,
        worst_node: ds.graph.base(),
        pass: true,
        conclusive: true,
    };
    for x in 0..ds.graph.node_count() as NodeId {
        if ds.base_distance[x as usize] > half + SLACK_ABS {
            continue;
        }
        check.inner_nodes += 1;
        let bound = ds.density(x) / (std::f64::consts::E * eps);
        let lower = fd[x as usize];
        let upper = lower + tail;
        if lower >= bound - SLACK_ABS {
            check.certified += 1;
            let margin = lower - bound;
            if margin < check.min_certified_margin {
                check.min_certified_margin = margin;
                check.worst_node = x;
            }
        } else if upper < bound - SLACK_ABS {
            check.violations += 1;
            check.worst_node = x;
        } else {
            check.indeterminate += 1;
        }
    }
    check.pass = check.violations == 0;
    check.conclusive = check.indeterminate == 0 && check.violations == 0;
    if check.certified == 0 {
        check.min_certified_margin = 0.0;
    }
    Ok(check)
}

/// Tail bound along a ray: the density integral over the tail segment
/// (and hence d_eps(u_n, u_m)) stays below e^{eps K} e^{-eps t_n} / eps
/// for n <= m, where t_n is the arclength to u_n and K the measured
/// rough quasi-geodesic constant of the ray.
///
/// The asserted quantity is the exact line integral of the density along
/// the ray, computable in closed form because rays are shortest arcs
/// from the base (each edge is radially affine). The deformed graph
/// distance is also reported; under trapezoid quadrature it carries a
/// chord bias of up to cosh(eps*len/2) per edge, so it is only asserted
/// against the bound when the quadrature is exact.
#[derive(Debug, Clone, Serialize)]
pub struct RayCauchyCheck {
    pub stages: usize,
    pub k_rough: f64,
    /// bound - integral tail, minimized over stage pairs.
    pub min_integral_slack: f64,
    pub integral_witness: (usize, usize),
    /// bound - deformed graph distance, minimized over stage pairs.
    pub min_graph_slack: f64,
    pub graph_witness: (usize, usize),
    /// Whether the graph-metric slack participates in `pass`.
    pub graph_asserted: bool,
    pub pass: bool,
}

pub fn check_ray_cauchy(ds: &DeformedSpace, ray: &ArcPath) -> Result<RayCauchyCheck> {
    if ray.len() < 3 {
        return Err(Error::InvalidParameter(
            "ray must have at least 3 nodes".into(),
        ));
    }
    if ray.first() != ds.graph.base() {
        return Err(Error::InvalidParameter(
            "ray must start at the base point".into(),
        ));
    }
    for w in ray.nodes().windows(2) {
        if ds.base_distance[w[1] as usize] <= ds.base_distance[w[0] as usize] {
            return Err(Error::InvalidParameter(format!(
                "ray must move strictly away from the base ({} -> {})",
                w[0], w[1]
            )));
        }
    }

    let k_rough = crate::boundary::verify_rough_quasi_geodesic(&ds.graph, ray)?.k_emp;
    let eps = ds.params.epsilon;

    // Exact density integral along the ray, prefix-summed. Non-affine
    // edges (possible only on user-supplied rays) fall back to the
    // trapezoid chord, which over-estimates and keeps the check sound.
    let mut integral = Vec::with_capacity(ray.len());
    integral.push(0.0);
    for w in ray.nodes().windows(2) {
        let (du, dv) = (
            ds.base_distance[w[0] as usize],
            ds.base_distance[w[1] as usize],
        );
        let len = ds
            .graph
            .edge_length(w[0], w[1])
            .expect("ray edges exist");
        let piece = if ((dv - du).abs() - len).abs() <= SLACK_ABS {
            (-eps * du.min(dv)).exp() * (-(-eps * len).exp_m1()) / eps
        } else {
            len * 0.5 * (ds.density[w[0] as usize] + ds.density[w[1] as usize])
        };
        integral.push(integral.last().unwrap() + piece);
    }

    let rows: Vec<Vec<f64>> = ray
        .nodes()
        .par_iter()
        .map(|&u| ds.deformed_row(u))
        .collect();

    let mut min_integral_slack = f64::INFINITY;
    let mut integral_witness = (0, 0);
    let mut min_graph_slack = f64::INFINITY;
    let mut graph_witness = (0, 0);
    for n in 0..ray.len() {
        let t_n = ray.params()[n];
        let bound = (eps * k_rough).exp() * (-eps * t_n).exp() / eps;
        for m in n..ray.len() {
            let tail = integral[m] - integral[n];
            if bound - tail < min_integral_slack {
                min_integral_slack = bound - tail;
                integral_witness = (n, m);
            }
            let d = rows[n][ray.nodes()[m] as usize];
            if bound - d < min_graph_slack {
                min_graph_slack = bound - d;
                graph_witness = (n, m);
            }
        }
    }
    let graph_asserted = matches!(ds.params.quadrature, Quadrature::ExactTree);
    let pass = min_integral_slack >= -SLACK_ABS
        && (!graph_asserted || min_graph_slack >= -SLACK_ABS);
    Ok(RayCauchyCheck {
        stages: ray.len(),
        k_rough,
        min_integral_slack,
        integral_witness,
        min_graph_slack,
        graph_witness,
        graph_asserted,
        pass,
    })
}
