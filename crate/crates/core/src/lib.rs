//! Conformal deformation of finite hyperbolic metric graphs.
//!
//! A positively weighted connected graph stands in for a truncated
//! intrinsic space: shortest-path distance is the metric, a marked base
//! point anchors the density exp(-eps * d(x, base)), and the frontier
//! nodes at the truncation radius serve as the boundary proxy. On top of
//! that the crate measures everything the deformation is supposed to
//! achieve: hyperbolicity constants, Harnack and diameter bounds,
//! quasiconvexity and double-cone uniformity ratios, Gehring-Hayman
//! constants, road displacements and rough quasi-geodesic defects, and
//! the boundary metrics tau/theta with their quasi-isometry comparison.
//!
//! Modules mirror the pipeline:
//!
//! - [`graph`], [`metric`], [`arc`], [`paths`]: the metric-space engine;
//! - [`hyperbolicity`]: Gromov products, four-point constants, tripod
//!   and arc-growth checks;
//! - [`generators`]: trees, {p,q} tilings, grids, random graphs,
//!   subdivision refinement;
//! - [`deformation`]: the density, deformed distances and the
//!   deformation-level checks;
//! - [`uniformity`]: quasiconvexity, double-cone and Gehring-Hayman
//!   ratios;
//! - [`boundary`]: roads, rough quasi-geodesics, the visual comparison,
//!   frontier proxies and the boundary quasi-isometry;
//! - [`sampling`], [`tolerances`]: deterministic pair samples and the
//!   central numeric knobs.
//!
//! Everything is deterministic: shortest-path ties break
//! lexicographically, randomness is seeded, parallel reductions carry
//! total-order tie-breaks.

pub mod arc;
pub mod boundary;
pub mod deformation;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod metric;
pub mod paths;
pub mod sampling;
pub mod tolerances;
pub mod uniformity;

pub use arc::ArcPath;
pub use boundary::{
    build_boundary_proxies, build_road, check_boundary_quasi_isometry, check_gromov_to_cauchy,
    check_visual_comparison, concatenate_road_arcs, verify_rough_quasi_geodesic,
    BoundaryProxySet, Road,
};
pub use deformation::{
    check_boundary_bound, check_diameter, check_harnack, check_local_bilipschitz,
    check_ray_cauchy, deform, epsilon_policy, DeformationParams, DeformedSpace, EpsilonPolicy,
    Quadrature,
};
pub use error::{Error, Result};
pub use generators::{generate, subdivide, GeneratorKind, GeneratorSpec};
pub use graph::{Edge, GraphMetadata, NodeId, WeightedMetricGraph};
pub use hyperbolicity::{
    estimate_delta, estimate_delta_with, gromov_product, verify_arc_growth, verify_tripod,
    DeltaMode, DeltaOptions, GromovProductTable, HyperbolicityReport,
};
pub use metric::DistanceTable;
pub use paths::{h_short_arcs, shortest_arc, shortest_arc_with_row};
pub use sampling::{all_pairs, sample_pairs, sample_pairs_among, PairSampleConfig};
pub use uniformity::{
    double_cone_bound, verify_gehring_hayman, verify_uniform, GehringHaymanReport,
    UniformityReport,
};
