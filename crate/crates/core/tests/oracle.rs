use anticross_core::linalg::{eigenvalues, symmetric_eigen};
use anticross_core::oracle::{
    build_low_energy_hamiltonian, classify_sign_with_tol, lowest_gap, min_gap_scan,
    problem_diagonal, qubit_permutation, scan_gap, DEGENERATE_GAP,
};
use anticross_core::two_level::basic_matrix;
use anticross_core::{
    build_adjacency, build_core, build_full_hamiltonian, build_instance, classify_sign,
    exact_spectrum, find_crossing, mis_bruteforce, DenseSymMatrix, Error, InstanceParams, Sign,
};
use nalgebra::DMatrix;

#[test]
fn smallest_problem_diagonal() {
    let s = build_instance(&InstanceParams::disjoint(1, 1, 1, 1.5)).unwrap();
    assert_eq!(problem_diagonal(&s).unwrap(), vec![0.0, -1.0, -1.0, -0.5]);
    let h = build_full_hamiltonian(&s, 0.0).unwrap();
    let m = h.as_matrix();
    assert_eq!(
        m.clone() - DMatrix::from_diagonal(&m.diagonal()),
        DMatrix::zeros(4, 4)
    );
}

#[test]
fn field_free_ground_state_is_the_global_minimum() {
    for p in [
        InstanceParams::disjoint(2, 4, 3, 3.0),
        InstanceParams::shared(2, 3, 3, 2.0),
    ] {
        let s = build_instance(&p).unwrap();
        let mis = mis_bruteforce(&build_adjacency(&s)).unwrap();
        let diag = problem_diagonal(&s).unwrap();
        let (arg, min) =
            diag.iter().enumerate().fold(
                (0, f64::INFINITY),
                |a, (i, &v)| if v < a.1 { (i, v) } else { a },
            );
        assert_eq!(min, -(mis.mis_size as f64));
        let e0 = exact_spectrum(&build_full_hamiltonian(&s, 0.0).unwrap(), 1).unwrap();
        assert!((e0.ground_energy() - min).abs() < 1e-12);
        if p.structure == anticross_core::Structure::Disjoint {
            assert_eq!(arg, 0b111 << 8);
        }
    }
}

#[test]
fn eigen_examples() {
    let r = exact_spectrum(&basic_matrix(1.0, 1.0), 2).unwrap();
    let r2 = 2f64.sqrt();
    assert!((r.eigenvalues[0] + (1.0 + r2) / 2.0).abs() < 1e-14);
    assert!((r.eigenvalues[1] - (r2 - 1.0) / 2.0).abs() < 1e-14);
    assert_eq!(
        eigenvalues(&DenseSymMatrix::identity(4)).unwrap(),
        vec![1.0; 4]
    );
    assert!(DenseSymMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0])).is_err());
}

#[test]
fn size_limits_are_enforced() {
    let s = build_instance(&InstanceParams::disjoint(3, 4, 4, 3.0)).unwrap();
    assert!(matches!(
        build_full_hamiltonian(&s, 1.0),
        Err(Error::TooLarge { .. })
    ));
    assert!(problem_diagonal(&s).is_ok());
    let big = build_instance(&InstanceParams::disjoint(4, 4, 5, 3.0)).unwrap();
    assert!(matches!(
        problem_diagonal(&big),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn sign_classification_examples() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert_eq!(classify_sign(&[h, h]).sign, Sign::SameSign);
    assert_eq!(classify_sign(&[h, -h]).sign, Sign::OppositeSign);
    assert_eq!(classify_sign(&[1.0, 0.0]).sign, Sign::SameSign);
    assert_eq!(classify_sign(&[-0.9, -0.1]).sign, Sign::SameSign);
    assert_eq!(
        classify_sign_with_tol(&[1.0, -1e-9], 1e-8).sign,
        Sign::SameSign
    );
}

#[test]
fn full_ground_state_is_same_sign() {
    let s = build_instance(&InstanceParams::shared(2, 3, 3, 2.0)).unwrap();
    for x in [0.05, 0.9, 3.0] {
        let g = exact_spectrum(&build_full_hamiltonian(&s, x).unwrap(), 1)
            .unwrap()
            .ground_state();
        assert_eq!(classify_sign(g.as_slice()).sign, Sign::SameSign);
    }
}

#[test]
fn spectrum_is_invariant_under_vertex_relabelling() {
    let s = build_instance(&InstanceParams::disjoint(2, 3, 3, 2.0)).unwrap();
    let n = s.n();
    let h = build_full_hamiltonian(&s, 1.1).unwrap();
    let vperm: Vec<usize> = (0..n).rev().collect();
    let perm = qubit_permutation(n, &vperm).unwrap();
    let e0 = eigenvalues(&h).unwrap();
    let e1 = eigenvalues(&h.permuted(&perm).unwrap()).unwrap();
    assert!(e0.iter().zip(&e1).all(|(a, b)| (a - b).abs() < 1e-10));
}

#[test]
fn low_energy_restriction_keeps_gap_order() {
    let s = build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).unwrap();
    let low = build_low_energy_hamiltonian(&s, 1.3).unwrap();
    assert_eq!(low.states.len(), 25 * 8);
    let full = build_full_hamiltonian(&s, 1.3).unwrap();
    let (el, ef) = (
        eigenvalues(&low.matrix).unwrap(),
        eigenvalues(&full).unwrap(),
    );
    assert!(ef[0] <= el[0] + 1e-12);
}

#[test]
fn two_level_family_gap_grows_with_field() {
    let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
    let scan = min_gap_scan(|t| Ok(basic_matrix(1.0, (1.0 - t) * 10.0)), &grid).unwrap();
    assert!((scan.t_star - 1.0).abs() < 1e-9);
    assert!((scan.gap_min - 1.0).abs() < 1e-12);
    assert!(scan.curve.windows(2).all(|p| p[1].1 < p[0].1));
}

#[test]
fn constant_family_and_degenerate_flag() {
    let grid = [0.0, 0.5, 1.0];
    let c = scan_gap(|_| Ok(0.7), &grid, 1e-6).unwrap();
    assert_eq!(c.gap_min, 0.7);
    assert!(!c.degenerate);
    let d = scan_gap(|_| Ok(0.0), &grid, 1e-6).unwrap();
    assert!(d.degenerate && d.gap_min < DEGENERATE_GAP);
    assert!(scan_gap(|_| Ok(0.0), &[0.0], 1e-6).is_err());
    assert!(scan_gap(|_| Ok(0.0), &[0.5, 0.1], 1e-6).is_err());
}

#[test]
fn core_gap_has_an_interior_minimum() {
    let s = build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).unwrap();
    let cp = find_crossing(&s).unwrap();
    let grid: Vec<f64> = (0..=160).map(|i| i as f64 / 160.0).collect();
    let scan = min_gap_scan(|t| Ok(build_core(&s, s.x_at(t)).h_core), &grid).unwrap();
    let x = s.x_at(scan.t_star);
    assert!((x - 1.314005388676891).abs() < 1e-4);
    assert!((scan.gap_min - 0.2460579430957992).abs() < 1e-9);
    assert!((x - cp.x_c).abs() < 0.3);
    assert!(scan.t_star > 0.0 && scan.t_star < 1.0);
}

#[test]
fn eigenpairs_pass_residual_checks() {
    let s = build_instance(&InstanceParams::disjoint(2, 3, 3, 2.0)).unwrap();
    let h = build_full_hamiltonian(&s, 0.8).unwrap();
    let r = exact_spectrum(&h, 4).unwrap();
    assert_eq!(r.len(), 4);
    let (all, _) = symmetric_eigen(h.as_matrix()).unwrap();
    assert!((r.gap().unwrap() - (all[1] - all[0])).abs() < 1e-12);
    assert!((lowest_gap(&h).unwrap() - (all[1] - all[0])).abs() < 1e-10);
}
