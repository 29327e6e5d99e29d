use anticross_core::two_level::{
    angle_eigenvectors, basic_matrix, classify_two_level, mixing_angle, solve_b, Classification,
};
use anticross_core::{exact_spectrum, Error};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[test]
fn field_free_site_is_diagonal() {
    let s = solve_b(1.0, 0.0).unwrap();
    assert_eq!(s.beta0, -1.0);
    assert_eq!(s.beta1, 0.0);
    assert_eq!(s.gamma, 0.0);
    assert_eq!(s.eigvec0, [0.0, 1.0]);
}

#[test]
fn pure_transverse_site() {
    let s = solve_b(0.0, 1.0).unwrap();
    assert!((s.beta0 + 0.5).abs() < 1e-15);
    assert!((s.beta1 - 0.5).abs() < 1e-15);
    assert!((s.gamma - 1.0).abs() < 1e-15);
}

#[test]
fn unit_parameters_match_frozen_values() {
    let s = solve_b(1.0, 1.0).unwrap();
    assert!((s.beta0 + (1.0 + SQRT2) / 2.0).abs() < 1e-14);
    assert!((s.beta0 + 1.207107).abs() < 1e-6);
    assert!((s.gamma - 0.414214).abs() < 1e-6);
    let numeric = exact_spectrum(&basic_matrix(1.0, 1.0), 2).unwrap();
    assert!((numeric.eigenvalues[0] + (1.0 + SQRT2) / 2.0).abs() < 1e-12);
    assert!((numeric.eigenvalues[1] - (SQRT2 - 1.0) / 2.0).abs() < 1e-12);
}

#[test]
fn both_zero_is_degenerate() {
    assert_eq!(solve_b(0.0, 0.0), Err(Error::DegeneratePair));
}

#[test]
fn ground_vector_is_gamma_one_and_row_order_swaps() {
    let s = solve_b(1.0, 2.0).unwrap();
    let [a, b] = s.eigvec0;
    assert!((a / b - s.gamma).abs() < 1e-14);
    let (g, _) = s.row_vectors();
    assert_eq!(g, [b, a]);
    let h = basic_matrix(1.0, 2.0);
    let m = h.as_matrix();
    let r0 = m[(0, 0)] * g[0] + m[(0, 1)] * g[1] - s.beta0 * g[0];
    let r1 = m[(1, 0)] * g[0] + m[(1, 1)] * g[1] - s.beta0 * g[1];
    assert!(r0.abs() < 1e-14 && r1.abs() < 1e-14);
}

#[test]
fn mixing_angle_reproduces_gamma() {
    // B(w, x) in (|0⟩, |1⟩) order: e1 = 0, e2 = -w, v = -x/2.
    for &(w, x) in &[(1.0, 1.0), (0.3, 4.0), (5.0, 0.2)] {
        let s = solve_b(w, x).unwrap();
        let theta = mixing_angle(0.0, -w, -x / 2.0);
        let (v0, _) = angle_eigenvectors(theta);
        assert!((1.0 / theta.tan() - s.gamma).abs() < 1e-12);
        assert!((v0[0] - s.eigvec0[0]).abs() < 1e-12 && (v0[1] - s.eigvec0[1]).abs() < 1e-12);
    }
}

#[test]
fn linear_crossing_is_an_anti_crossing() {
    let r = classify_two_level(|t| -t, |t| t - 1.0, |_| 0.1, (0.0, 1.0)).unwrap();
    assert_eq!(r.classification, Classification::AntiCrossing);
    assert!((r.x_star - 0.5).abs() < 1e-12);
    assert!((r.gap_at_star - 0.2).abs() < 1e-12);
}

#[test]
fn parallel_levels_only_repel() {
    let r = classify_two_level(|_| -1.0, |_| 0.0, |_| 0.3, (0.0, 2.0)).unwrap();
    assert_eq!(r.classification, Classification::LevelRepulsionOnly);
}

#[test]
fn zero_coupling_is_a_true_crossing() {
    let r = classify_two_level(|t| t, |t| 1.0 - t, |_| 0.0, (0.0, 1.0)).unwrap();
    assert_eq!(r.classification, Classification::Crossing);
}

#[test]
fn repeated_sign_changes_are_reported() {
    let r = classify_two_level(|t| (t * 10.0).sin(), |_| 0.0, |_| 0.1, (0.1, 6.0));
    assert!(matches!(r, Err(Error::MultipleRoots { .. })));
}
