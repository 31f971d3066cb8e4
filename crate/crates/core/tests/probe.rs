use std::time::Instant;

use uniformize_core::*;

#[test]
#[ignore]
fn probe_tiling_numbers() {
    for rings in [1u32, 2, 3, 4, 5] {
        let t0 = Instant::now();
        let g = generate(&GeneratorSpec::new(GeneratorKind::HyperbolicTiling {
            p: 7,
            q: 3,
            rings,
        }))
        .unwrap();
        let gen_t = t0.elapsed();
        let delta = if g.node_count() <= 400 {
            let t1 = Instant::now();
            let d = estimate_delta(&g, DeltaMode::Global).unwrap().delta;
            println!("  delta scan: {:?}", t1.elapsed());
            Some(d)
        } else {
            None
        };
        println!(
            "rings={rings}: n={} e={} frontier={} delta={:?} gen={gen_t:?}",
            g.node_count(),
            g.edge_count(),
            g.frontier().len(),
            delta
        );
    }
}

#[test]
#[ignore]
fn probe_tree_timings() {
    for (b, r) in [(2u32, 8u32), (2, 10), (3, 8)] {
        let t0 = Instant::now();
        let g = generate(&GeneratorSpec::new(GeneratorKind::RegularTree {
            branching: b,
            radius: r,
        }))
        .unwrap();
        let rep = estimate_delta(&g, DeltaMode::Global).unwrap();
        println!(
            "tree b={b} R={r}: n={} delta={} in {:?}",
            g.node_count(),
            rep.delta,
            t0.elapsed()
        );
        let t1 = Instant::now();
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let h = check_harnack(&ds);
        println!("  harnack pairs={} in {:?}", h.pairs, t1.elapsed());
        let t2 = Instant::now();
        let d = check_diameter(&ds);
        println!("  diameter {} in {:?}", d.diameter, t2.elapsed());
    }
}

#[test]
#[ignore]
fn probe_grid_delta() {
    let g = generate(&GeneratorSpec::new(GeneratorKind::EuclideanGrid { side: 6 })).unwrap();
    let rep = estimate_delta(&g, DeltaMode::Global).unwrap();
    println!("grid 6x6 delta = {} witness {:?}", rep.delta, rep.witness);
}

#[test]
#[ignore]
fn probe_stability_numbers() {
    // GH and uniformity across tiling radii at eps = 0.3.
    for rings in [3u32, 4, 5, 6, 7] {
        let g = generate(&GeneratorSpec::new(GeneratorKind::HyperbolicTiling {
            p: 7,
            q: 3,
            rings,
        }))
        .unwrap();
        let delta = estimate_delta(&g, DeltaMode::Global).unwrap().delta;
        let t = DistanceTable::compute(&g);
        let ds = deform(&g, DeformationParams::new(0.3).unwrap()).unwrap();
        let pairs = sample_pairs(&g, &PairSampleConfig::default());
        let gh = verify_gehring_hayman(&ds, &t, &pairs, 1.0 / 14.0, 1).unwrap();
        let uni = verify_uniform(&ds, &t, &pairs, 1.0 / 14.0, Some(delta)).unwrap();
        // Visual on inner pairs at a gate-respecting eps.
        let eps_b = 0.9 / (5.0 * delta);
        let dsb = deform(&g, DeformationParams::new(eps_b).unwrap()).unwrap();
        let inner: Vec<NodeId> = {
            let d = uniformize_core::metric::single_source(&g, 0);
            let rg = g
                .frontier()
                .iter()
                .map(|&f| d[f as usize])
                .fold(f64::INFINITY, f64::min);
            g.nodes().filter(|&x| d[x as usize] <= rg / 2.0).collect()
        };
        let vis = check_visual_comparison(&dsb, &t, &all_pairs(&inner), delta).unwrap();
        println!(
            "rings={rings} n={} delta={delta} K_emp={:.6} A_qc={:.6} A_cone={:.6} skipped={} | eps_b={eps_b:.4} C_emp={:.4} branches=({}, {})",
            g.node_count(),
            gh.k_emp,
            uni.a_quasiconvex,
            uni.a_cone,
            uni.skipped_boundary_points,
            vis.c_emp,
            vis.small_branch_pairs,
            vis.large_branch_pairs,
        );
    }
}

#[test]
#[ignore]
fn probe_tree_stability() {
    // Visual comparison stability on binary trees, eps = 0.5, exact.
    for r in [8u32, 10] {
        let g = generate(&GeneratorSpec::new(GeneratorKind::RegularTree {
            branching: 2,
            radius: r,
        }))
        .unwrap();
        let t = DistanceTable::compute(&g);
        let params = DeformationParams::new(0.5)
            .unwrap()
            .with_quadrature(Quadrature::ExactTree);
        let ds = deform(&g, params).unwrap();
        let inner: Vec<NodeId> = {
            let d = uniformize_core::metric::single_source(&g, 0);
            g.nodes()
                .filter(|&x| d[x as usize] <= r as f64 / 2.0)
                .collect()
        };
        let vis = check_visual_comparison(&ds, &t, &all_pairs(&inner), 0.0).unwrap();
        println!("tree R={r}: C_emp={:.6} branches=({}, {})", vis.c_emp, vis.small_branch_pairs, vis.large_branch_pairs);
    }
    // QI stability, eps = 0.5, trapezoid.
    for r in [6u32, 8, 10] {
        let g = generate(&GeneratorSpec::new(GeneratorKind::RegularTree {
            branching: 2,
            radius: r,
        }))
        .unwrap();
        let t = DistanceTable::compute(&g);
        let ds = deform(&g, DeformationParams::new(0.5).unwrap()).unwrap();
        let proxies = build_boundary_proxies(&ds, &t, 0, 0.0).unwrap();
        let qi = check_boundary_quasi_isometry(&ds, &proxies).unwrap();
        println!("tree R={r}: M_emp={:.6} pairs={}", qi.m_emp, qi.proxy_pairs);
    }
}
