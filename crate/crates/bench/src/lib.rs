//! Shared fixtures for the kernel benchmarks.

use uniformize_core::{generate, GeneratorKind, GeneratorSpec, WeightedMetricGraph};

pub fn binary_tree(radius: u32) -> WeightedMetricGraph {
    generate(&GeneratorSpec::new(GeneratorKind::RegularTree {
        branching: 2,
        radius,
    }))
    .expect("tree generates")
}

pub fn heptagonal_ball(rings: u32) -> WeightedMetricGraph {
    generate(&GeneratorSpec::new(GeneratorKind::HyperbolicTiling {
        p: 7,
        q: 3,
        rings,
    }))
    .expect("tiling generates")
}

pub fn grid(side: u32) -> WeightedMetricGraph {
    generate(&GeneratorSpec::new(GeneratorKind::EuclideanGrid { side }))
        .expect("grid generates")
}
