//! Brute-force ground truth on the full `2^n` computational basis.
//!
//! Basis index bit `i` set means vertex `i` is occupied. The Hamiltonian is
//!
//! `H(x) = -x·S^X - w·Σ ž_i + J_zz·Σ_(i,j)∈E ž_i ž_j + J_xx·Σ_cliques S^XX`
//!
//! with `S^X = ½Σσ^x` and `S^XX = ¼Σ_(i<j) σ^x_i σ^x_j`, the normalization the
//! clique and collective-spin reductions are written in.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{build_adjacency, InstanceSpec};
use crate::linalg::{eigenvalues, DenseSymMatrix, MAX_DENSE_DIM};

pub use crate::linalg::{exact_spectrum, SpectrumResult};

/// Largest instance whose problem diagonal is tabulated.
pub const DIAGONAL_MAX_N: usize = 20;

/// Largest instance whose full Hamiltonian fits dense storage.
pub const FULL_MAX_N: usize = 12;

/// Default tolerance of [`classify_sign`].
pub const SIGN_TOL: f64 = 1e-8;

/// Gaps below this are flagged as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-13;

/// Golden-section refinement stops when the bracket shrinks by this factor.
pub const GOLDEN_REL_TOL: f64 = 1e-6;

/// Classical energy `-w·|S| + J_zz·|E(S)|` of every basis state.
pub fn problem_diagonal(spec: &InstanceSpec) -> Result<Vec<f64>> {
    let n = spec.n();
    if n > DIAGONAL_MAX_N {
        return Err(Error::TooLarge {
            what: "problem diagonal (qubits)",
            size: n,
            limit: DIAGONAL_MAX_N,
        });
    }
    let adj = build_adjacency(spec);
    let w = spec.w();
    let j = spec.j_zz();
    Ok((0..1usize << n)
        .into_par_iter()
        .map(|s| {
            let s = s as u64;
            let inside = adj
                .edges
                .iter()
                .filter(|&&(a, b)| s >> a & 1 == 1 && s >> b & 1 == 1)
                .count();
            -w * s.count_ones() as f64 + j * inside as f64
        })
        .collect())
}

/// Pairs of qubits coupled by the XX driver (all intra-clique pairs).
fn xx_pairs(spec: &InstanceSpec) -> Vec<(usize, usize)> {
    let adj = build_adjacency(spec);
    let mut pairs = Vec::new();
    for clique in &adj.cliques {
        for (a, &u) in clique.iter().enumerate() {
            for &v in &clique[a + 1..] {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

/// Dense full-space Hamiltonian at transverse field `x`.
pub fn build_full_hamiltonian(spec: &InstanceSpec, x: f64) -> Result<DenseSymMatrix> {
    let n = spec.n();
    if n > FULL_MAX_N {
        return Err(Error::TooLarge {
            what: "full Hamiltonian (qubits)",
            size: n,
            limit: FULL_MAX_N,
        });
    }
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    let diag = problem_diagonal(spec)?;
    let dim = 1usize << n;
    let pairs = xx_pairs(spec);
    let jxx = spec.j_xx();
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        h[(s, s)] = diag[s];
        for i in 0..n {
            h[(s ^ (1 << i), s)] = -0.5 * x;
        }
        if jxx != 0.0 {
            for &(a, b) in &pairs {
                h[(s ^ (1 << a) ^ (1 << b), s)] = 0.25 * jxx;
            }
        }
    }
    Ok(DenseSymMatrix::from_symmetric(h))
}

/// Full Hamiltonian restricted to states with at most one occupied vertex
/// per clique (R unrestricted).
#[derive(Debug, Clone)]
pub struct LowEnergyHamiltonian {
    pub matrix: DenseSymMatrix,
    /// Full-basis index of each retained state.
    pub states: Vec<usize>,
}

/// Projection of the full Hamiltonian onto the clique independent-set subspace.
pub fn build_low_energy_hamiltonian(spec: &InstanceSpec, x: f64) -> Result<LowEnergyHamiltonian> {
    let n = spec.n();
    let dim = (spec.n_c() + 1)
        .checked_pow(spec.m_l() as u32)
        .and_then(|d| d.checked_mul(1usize.checked_shl(spec.m_r() as u32)?))
        .unwrap_or(usize::MAX);
    if dim > MAX_DENSE_DIM || n > DIAGONAL_MAX_N {
        return Err(Error::TooLarge {
            what: "low-energy Hamiltonian",
            size: dim,
            limit: MAX_DENSE_DIM,
        });
    }
    let adj = build_adjacency(spec);
    let allowed = |s: usize| {
        adj.cliques
            .iter()
            .all(|c| c.iter().filter(|&&v| s >> v & 1 == 1).count() <= 1)
    };
    let states: Vec<usize> = (0..1usize << n).filter(|&s| allowed(s)).collect();
    let index: HashMap<usize, usize> = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let w = spec.w();
    let j = spec.j_zz();
    let jxx = spec.j_xx();
    let pairs = xx_pairs(spec);
    let mut h = DMatrix::zeros(states.len(), states.len());
    for (k, &s) in states.iter().enumerate() {
        let inside = adj
            .edges
            .iter()
            .filter(|&&(a, b)| s >> a & 1 == 1 && s >> b & 1 == 1)
            .count();
        h[(k, k)] = -w * s.count_ones() as f64 + j * inside as f64;
        for i in 0..n {
            if let Some(&t) = index.get(&(s ^ (1 << i))) {
                h[(t, k)] = -0.5 * x;
            }
        }
        if jxx != 0.0 {
            for &(a, b) in &pairs {
                if let Some(&t) = index.get(&(s ^ (1 << a) ^ (1 << b))) {
                    h[(t, k)] = 0.25 * jxx;
                }
            }
        }
    }
    Ok(LowEnergyHamiltonian {
        matrix: DenseSymMatrix::from_symmetric(h),
        states,
    })
}

/// Basis permutation induced by relabelling qubit `i` as `vertex_perm[i]`.
///
/// Entry `k` of the result is the old index of the new basis state `k`.
pub fn qubit_permutation(n: usize, vertex_perm: &[usize]) -> Result<Vec<usize>> {
    if vertex_perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: vertex_perm.len(),
        });
    }
    Ok((0..1usize << n)
        .map(|new| {
            (0..n)
                .filter(|&i| new >> vertex_perm[i] & 1 == 1)
                .fold(0usize, |old, i| old | 1 << i)
        })
        .collect())
}

/// Sign structure of a real state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    SameSign,
    OppositeSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignClass {
    pub sign: Sign,
    pub tol: f64,
}

/// Same-sign iff every amplitude is `>= -tol` once the largest-magnitude
/// amplitude is made positive.
pub fn classify_sign_with_tol(state: &[f64], tol: f64) -> SignClass {
    let pivot = state
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(0.0);
    let phase = if pivot < 0.0 { -1.0 } else { 1.0 };
    let same = state.iter().all(|&a| phase * a >= -tol);
    SignClass {
        sign: if same {
            Sign::SameSign
        } else {
            Sign::OppositeSign
        },
        tol,
    }
}

pub fn classify_sign(state: &[f64]) -> SignClass {
    classify_sign_with_tol(state, SIGN_TOL)
}

/// Result of a minimum-gap search along a one-parameter family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapScan {
    pub t_star: f64,
    pub gap_min: f64,
    /// `(t, gap)` at every grid point.
    pub curve: Vec<(f64, f64)>,
    /// The minimum gap is below [`DEGENERATE_GAP`].
    pub degenerate: bool,
}

/// `E1 - E0` of a symmetric matrix.
pub fn lowest_gap(h: &DenseSymMatrix) -> Result<f64> {
    if h.dim() < 2 {
        return Err(Error::InvalidParameter(
            "a gap needs at least two levels".into(),
        ));
    }
    let e = eigenvalues(h)?;
    Ok(e[1] - e[0])
}

/// Minimum of `E1 - E0` over the grid, refined by golden-section search.
pub fn min_gap_scan<F>(family: F, grid: &[f64]) -> Result<GapScan>
where
    F: Fn(f64) -> Result<DenseSymMatrix> + Sync,
{
    scan_gap(|t| lowest_gap(&family(t)?), grid, GOLDEN_REL_TOL)
}

/// Minimum of an arbitrary gap function over an ascending grid.
///
/// The bracket around the best grid point is narrowed by golden-section
/// search until it is `rel_tol` of its initial width.
pub fn scan_gap<G>(gap: G, grid: &[f64], rel_tol: f64) -> Result<GapScan>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if grid.len() < 2 {
        return Err(Error::InvalidParameter(
            "scan grid needs at least two points".into(),
        ));
    }
    if grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter(
            "scan grid must be strictly ascending".into(),
        ));
    }
    let values: Vec<f64> = grid.par_iter().map(|&t| gap(t)).collect::<Result<_>>()?;
    let curve: Vec<(f64, f64)> = grid.iter().copied().zip(values.iter().copied()).collect();
    let best = (0..values.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty grid");
    let (mut t_star, mut gap_min) = curve[best];

    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(grid.len() - 1)];
    let tol = rel_tol * (b - a);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = gap(c)?;
    let mut fd = gap(d)?;
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gap(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gap(d)?;
        }
    }
    for (t, g) in [(c, fc), (d, fd)] {
        if g < gap_min {
            t_star = t;
            gap_min = g;
        }
    }
    Ok(GapScan {
        t_star,
        gap_min,
        curve,
        degenerate: gap_min < DEGENERATE_GAP,
    })
}
