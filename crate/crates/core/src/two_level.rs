//! The basic two-level matrix `B(w, x)` and the generic anti-crossing test.
//!
//! `B(w, x) = [[-w, -x/2], [-x/2, 0]]` acts on a single site whose first row is
//! the occupied state `|1⟩` and second row the empty state `|0⟩`. Solution
//! vectors are reported in ket order `(|0⟩, |1⟩)`, so the ground state reads
//! `(γ, 1)/√(1+γ²)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseSymMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelSolution {
    pub beta0: f64,
    pub beta1: f64,
    /// Mixing coefficient, `x / (w + √(w² + x²))`.
    pub gamma: f64,
    /// Ground state in ket order `(|0⟩, |1⟩)`.
    pub eigvec0: [f64; 2],
    /// Excited state in ket order `(|0⟩, |1⟩)`.
    pub eigvec1: [f64; 2],
}

impl TwoLevelSolution {
    /// Eigenvectors in the row order of [`basic_matrix`] (`|1⟩` first).
    pub fn row_vectors(&self) -> ([f64; 2], [f64; 2]) {
        (
            [self.eigvec0[1], self.eigvec0[0]],
            [self.eigvec1[1], self.eigvec1[0]],
        )
    }
}

pub fn basic_matrix(w: f64, x: f64) -> DenseSymMatrix {
    DenseSymMatrix::from_symmetric(DMatrix::from_row_slice(
        2,
        2,
        &[-w, -0.5 * x, -0.5 * x, 0.0],
    ))
}

/// Closed-form eigensystem of `B(w, x)`.
pub fn solve_b(w: f64, x: f64) -> Result<TwoLevelSolution> {
    if !(w.is_finite() && x.is_finite()) {
        return Err(Error::InvalidParameter("w and x must be finite".into()));
    }
    if w == 0.0 && x == 0.0 {
        return Err(Error::DegeneratePair);
    }
    let r = w.hypot(x);
    // Half-angle form of γ = x/(w + r); stable for either sign of w.
    let phi = 0.5 * x.atan2(w);
    let (s, c) = phi.sin_cos();
    let gamma = if w >= 0.0 { x / (w + r) } else { (r - w) / x };
    Ok(TwoLevelSolution {
        beta0: -0.5 * (w + r),
        beta1: -0.5 * (w - r),
        gamma,
        eigvec0: [s, c],
        eigvec1: [c, -s],
    })
}

/// Ground-branch mixing angle of `[[e1, v], [v, e2]]` in basis `(|0⟩, |1⟩)`.
///
/// `tan 2θ = 2v/(e1 - e2)`, with the branch chosen so that
/// `cos θ|0⟩ + sin θ|1⟩` is the lower eigenvector.
pub fn mixing_angle(e1: f64, e2: f64, v: f64) -> f64 {
    0.5 * (2.0 * v).atan2(e1 - e2) + std::f64::consts::FRAC_PI_2
}

/// `(λ₋, λ₊)` eigenvectors from a mixing angle, in basis `(|0⟩, |1⟩)`.
pub fn angle_eigenvectors(theta: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = theta.sin_cos();
    ([c, s], [-s, c])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// The unperturbed levels cross and the coupling is nonzero there.
    AntiCrossing,
    /// The unperturbed levels cross with vanishing coupling: a true crossing.
    Crossing,
    /// The unperturbed levels never cross in the window.
    LevelRepulsionOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiCrossingReport {
    /// Crossing point, or the point of closest approach without one.
    pub x_star: f64,
    /// `2|v(x*)|` at a crossing, else the two-level gap at closest approach.
    pub gap_at_star: f64,
    pub classification: Classification,
}

const SAMPLES: usize = 512;
const ROOT_TOL: f64 = 1e-12;
const ZERO_COUPLING: f64 = 1e-14;

/// Bracketed bisection of a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if b - a <= tol || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Classifies the two-level family `[[e1, v], [v, e2]]` over `window`.
pub fn classify_two_level(
    e1: impl Fn(f64) -> f64,
    e2: impl Fn(f64) -> f64,
    v: impl Fn(f64) -> f64,
    window: (f64, f64),
) -> Result<AntiCrossingReport> {
    let (lo, hi) = window;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidParameter(format!(
            "empty window [{lo}, {hi}]"
        )));
    }
    let diff = |x: f64| e1(x) - e2(x);
    let xs: Vec<f64> = (0..=SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / SAMPLES as f64)
        .collect();
    let ds: Vec<f64> = xs.iter().map(|&x| diff(x)).collect();
    let mut roots = Vec::new();
    for i in 0..SAMPLES {
        if ds[i] == 0.0 {
            roots.push(xs[i]);
        } else if ds[i].signum() != ds[i + 1].signum() && ds[i + 1] != 0.0 {
            roots.push(bisect(diff, xs[i], xs[i + 1], ROOT_TOL));
        }
    }
    if ds[SAMPLES] == 0.0 {
        roots.push(xs[SAMPLES]);
    }
    match roots.len() {
        0 => {
            let k = (0..=SAMPLES)
                .min_by(|&a, &b| ds[a].abs().total_cmp(&ds[b].abs()))
                .expect("samples");
            let x = xs[k];
            Ok(AntiCrossingReport {
                x_star: x,
                gap_at_star: ds[k].hypot(2.0 * v(x)),
                classification: Classification::LevelRepulsionOnly,
            })
        }
        1 => {
            let x = roots[0];
            let coupling = v(x);
            Ok(AntiCrossingReport {
                x_star: x,
                gap_at_star: 2.0 * coupling.abs(),
                classification: if coupling.abs() > ZERO_COUPLING {
                    Classification::AntiCrossing
                } else {
                    Classification::Crossing
                },
            })
        }
        _ => Err(Error::MultipleRoots { roots }),
    }
}
