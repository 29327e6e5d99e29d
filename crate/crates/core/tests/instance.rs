use anticross_core::instance::Schedule;
use anticross_core::{
    build_adjacency, build_instance, mis_bruteforce, Error, InstanceParams, Structure,
};

#[test]
fn reference_spec_is_valid_and_in_regime() {
    let s = build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).unwrap();
    assert!(s.crossing_regime());
    assert!(s.anti_crossing_condition());
    assert_eq!(s.n(), 11);
    assert_eq!(s.m_g(), 3);
    assert_eq!(s.w(), 1.0);
    assert_eq!(s.gamma1(), 8.0);
}

#[test]
fn boundary_spec_is_outside_regime() {
    let s = build_instance(&InstanceParams::disjoint(1, 1, 1, 1.0)).unwrap();
    assert!(!s.crossing_regime());
}

#[test]
fn weak_penalty_is_rejected() {
    let r = build_instance(&InstanceParams::disjoint(2, 4, 3, 0.5));
    assert!(matches!(r, Err(Error::InvalidParameter(_))));
}

#[test]
fn zero_sizes_are_rejected() {
    for p in [
        InstanceParams::disjoint(0, 4, 3, 3.0),
        InstanceParams::disjoint(2, 0, 3, 3.0),
        InstanceParams::disjoint(2, 4, 0, 3.0),
        InstanceParams::disjoint(2, 4, 3, 3.0).with_w(0.0),
    ] {
        assert!(build_instance(&p).is_err());
    }
}

#[test]
fn shared_global_size_counts_both_sides() {
    let s = build_instance(&InstanceParams::shared(2, 4, 3, 3.0)).unwrap();
    assert_eq!(s.m_g(), 5);
    assert_eq!(s.structure(), Structure::Shared);
}

#[test]
fn edge_counts() {
    let count = |p| build_adjacency(&build_instance(&p).unwrap()).edges.len();
    assert_eq!(count(InstanceParams::disjoint(2, 4, 3, 3.0)), 36);
    assert_eq!(count(InstanceParams::shared(2, 4, 3, 3.0)), 30);
    assert_eq!(count(InstanceParams::disjoint(1, 1, 1, 1.0)), 1);
}

#[test]
fn adjacency_structure_rules() {
    let s = build_instance(&InstanceParams::shared(2, 4, 3, 3.0)).unwrap();
    let adj = build_adjacency(&s);
    let masks = adj.neighbour_masks();
    for r in &adj.r {
        for clique in &adj.cliques {
            let missing: Vec<_> = clique
                .iter()
                .filter(|&&v| masks[*r] >> v & 1 == 0)
                .collect();
            assert_eq!(missing, vec![&clique[0]]);
        }
        for r2 in &adj.r {
            assert_eq!(masks[*r] >> r2 & 1, 0);
        }
    }
    assert_eq!(adj, build_adjacency(&s));
}

#[test]
fn independent_set_statistics() {
    let d = build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).unwrap();
    let m = mis_bruteforce(&build_adjacency(&d)).unwrap();
    assert_eq!((m.mis_size, m.mis_count), (3, 1));
    assert_eq!(m.maximal_by_size.get(&2), Some(&16));

    let s = build_instance(&InstanceParams::shared(2, 4, 3, 3.0)).unwrap();
    let m = mis_bruteforce(&build_adjacency(&s)).unwrap();
    assert_eq!((m.mis_size, m.mis_count), (5, 1));
    assert_eq!(m.maximal_by_size.get(&2), Some(&15));
}

#[test]
fn single_vertex_graph() {
    let adj = anticross_core::GraphAdjacency {
        cliques: vec![],
        r: vec![0],
        edges: vec![],
    };
    let m = mis_bruteforce(&adj).unwrap();
    assert_eq!((m.mis_size, m.mis_count), (1, 1));
}

#[test]
fn oversized_graph_is_refused() {
    let s = build_instance(&InstanceParams::disjoint(5, 4, 6, 3.0)).unwrap();
    assert!(matches!(
        mis_bruteforce(&build_adjacency(&s)),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn schedule_endpoints_are_exact() {
    let sch = Schedule::uniform(8.0, 0.0, 1.0, 5).unwrap();
    assert_eq!(sch.x(0.0), 8.0);
    assert_eq!(sch.x(1.0), 0.0);
    assert_eq!(sch.grid, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    assert!(sch.xs().windows(2).all(|p| p[1] <= p[0]));
    assert!(Schedule::uniform(8.0, 0.0, 1.0, 1).is_err());
    assert!(Schedule::uniform(8.0, 0.6, 0.4, 3).is_err());
}

#[test]
fn params_roundtrip_through_spec() {
    let p = InstanceParams::shared(3, 4, 4, 5.0)
        .with_j_xx(0.5)
        .with_gamma1(10.0)
        .with_w(2.0);
    let s = build_instance(&p).unwrap();
    let q = s.params();
    assert_eq!(build_instance(&q).unwrap(), s);
    assert!((s.w_eff() - (2.0 - 3.0 * 0.5 / 4.0)).abs() < 1e-15);
    assert!((s.f_c() - 0.75).abs() < 1e-15);
    assert!((s.t_at(s.x_at(0.3)) - 0.3).abs() < 1e-15);
}
