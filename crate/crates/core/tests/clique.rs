use anticross_core::clique::{
    single_clique_hamiltonian, verify_clique_conjugation, CONJUGATION_MAX_NC,
};
use anticross_core::linalg::{eigenvalues, max_abs_diff};
use anticross_core::two_level::solve_b;
use anticross_core::{build_clique_basis, restricted_operators, Error};
use nalgebra::DMatrix;

#[test]
fn basis_is_orthogonal_with_leading_uniform_and_empty_rows() {
    for n_c in 1..=9 {
        let b = build_clique_basis(n_c).unwrap();
        let d = n_c + 1;
        let gram = &b.u * b.u.transpose();
        assert!(max_abs_diff(&gram, &DMatrix::identity(d, d)) < 1e-12);
        assert_eq!(b.u[(0, 0)], 0.0);
        for i in 1..d {
            assert!((b.u[(0, i)] - 1.0 / (n_c as f64).sqrt()).abs() < 1e-15);
        }
        assert_eq!(b.u[(1, 0)], 1.0);
        for r in 2..d {
            assert_eq!(b.u[(r, 0)], 0.0);
        }
    }
}

#[test]
fn small_clique_bases() {
    let b = build_clique_basis(1).unwrap();
    assert_eq!(b.u, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let b = build_clique_basis(2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((b.u[(2, 1)].abs() - h).abs() < 1e-15);
    assert!((b.u[(2, 1)] + b.u[(2, 2)]).abs() < 1e-15);
    let b = build_clique_basis(4).unwrap();
    assert!((1..5).all(|i| (b.u[(0, i)] - 0.5).abs() < 1e-15));
}

#[test]
fn restricted_operator_blocks() {
    let r = restricted_operators(1).unwrap();
    assert_eq!(r.xbar, DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0]));
    let r = restricted_operators(4).unwrap();
    assert_eq!(r.xbar[(0, 1)], 1.0);
    assert_eq!(r.xxbar[(0, 0)], 0.75);
    assert_eq!(r.xxbar[(2, 2)], -0.25);
    let r = restricted_operators(9).unwrap();
    assert_eq!(r.xbar[(0, 1)], 1.5);
}

#[test]
fn conjugation_matches_closed_forms() {
    for n_c in 1..=8 {
        for &(w, x, jxx) in &[(1.0, 0.7, 0.0), (1.3, 2.1, 0.4), (0.5, 0.0, -0.3)] {
            let res = verify_clique_conjugation(w, n_c, x, jxx).unwrap();
            assert!(res <= 1e-12, "n_c = {n_c}: {res:e}");
        }
    }
    assert_eq!(verify_clique_conjugation(1.0, 1, 0.3, 0.0).unwrap(), 0.0);
    assert!(matches!(
        verify_clique_conjugation(1.0, CONJUGATION_MAX_NC + 1, 1.0, 0.0),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn clique_hamiltonian_examples() {
    let h = single_clique_hamiltonian(1.0, 4, 1.0, 0.0).unwrap();
    let e = eigenvalues(&h).unwrap();
    assert!((e[0] + (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(&e[1..4], &[-1.0, -1.0, -1.0]);

    let e = eigenvalues(&single_clique_hamiltonian(1.0, 1, 0.0, 0.0).unwrap()).unwrap();
    assert_eq!(e, vec![-1.0, 0.0]);

    let h = single_clique_hamiltonian(1.0, 5, 0.0, 1.0).unwrap();
    assert_eq!(h.get(0, 0), 0.0);
}

#[test]
fn clique_spectrum_is_two_level_plus_scalars() {
    let (w, n_c, x, jxx) = (1.0, 6, 1.4, 0.6);
    let e = eigenvalues(&single_clique_hamiltonian(w, n_c, x, jxx).unwrap()).unwrap();
    let w_eff = w - (n_c as f64 - 1.0) * jxx / 4.0;
    let b = solve_b(w_eff, (n_c as f64).sqrt() * x).unwrap();
    let mut expected = vec![b.beta0, b.beta1];
    expected.extend(std::iter::repeat(-(w + jxx / 4.0)).take(n_c - 1));
    expected.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn xx_driver_shifts_same_and_opposite_sign_sectors_apart() {
    let n_c = 4;
    let at = |jxx: f64| single_clique_hamiltonian(1.0, n_c, 0.0, jxx).unwrap();
    assert_eq!(at(0.0).get(2, 2), -1.0);
    assert!(at(0.8).get(2, 2) < at(0.4).get(2, 2));
    assert!(at(0.8).get(0, 0) > at(0.4).get(0, 0));
}
