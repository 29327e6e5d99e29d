//! Single-clique reduction to the independent-set subspace.
//!
//! The independent-set basis is `{N_0, N_1, …, N_nc}` with `N_0` the empty
//! set and `N_i` the singleton `{i}`. The angular-momentum basis is ordered
//! `{|s,-(s-1)⟩, |s,-s⟩, opposite-sign singletons…}` so that the same-sign
//! two-level block leads.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, max_abs_diff, DenseSymMatrix};
use crate::two_level::basic_matrix;

/// Largest clique for which the full `2^nc` conjugation check runs.
pub const CONJUGATION_MAX_NC: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CliqueBasis {
    pub n_c: usize,
    /// Total spin `n_c / 2`.
    pub spin: f64,
    /// Orthogonal `(n_c+1)×(n_c+1)` matrix; row `a` is the `a`-th reordered
    /// angular-momentum state in independent-set coordinates.
    pub u: DMatrix<f64>,
}

pub fn build_clique_basis(n_c: usize) -> Result<CliqueBasis> {
    if n_c < 1 {
        return Err(Error::InvalidParameter("n_c must be at least 1".into()));
    }
    let d = n_c + 1;
    let mut u = DMatrix::zeros(d, d);
    let amp = 1.0 / (n_c as f64).sqrt();
    for i in 1..d {
        u[(0, i)] = amp;
    }
    u[(1, 0)] = 1.0;
    // Gram-Schmidt over the seeds N_1 - N_k.
    for k in 2..d {
        let mut v = vec![0.0; d];
        v[1] = 1.0;
        v[k] = -1.0;
        for r in 0..k {
            let dot: f64 = (0..d).map(|c| u[(r, c)] * v[c]).sum();
            for (c, vc) in v.iter_mut().enumerate() {
                *vc -= dot * u[(r, c)];
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        for (c, vc) in v.iter().enumerate() {
            u[(k, c)] = vc / norm;
        }
    }
    Ok(CliqueBasis {
        n_c,
        spin: n_c as f64 / 2.0,
        u,
    })
}

/// Collective operators restricted to the independent-set subspace and
/// expressed in the reordered angular-momentum basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedOps {
    /// `Σ ž_i`.
    pub zbar: DMatrix<f64>,
    /// `½ Σ σ^x_i`.
    pub xbar: DMatrix<f64>,
    /// `¼ Σ_(i<j) σ^x_i σ^x_j`.
    pub xxbar: DMatrix<f64>,
}

/// Closed-form block-diagonal restricted operators.
pub fn restricted_operators(n_c: usize) -> Result<RestrictedOps> {
    if n_c < 1 {
        return Err(Error::InvalidParameter("n_c must be at least 1".into()));
    }
    let d = n_c + 1;
    let n = n_c as f64;
    let mut zbar = DMatrix::identity(d, d);
    zbar[(1, 1)] = 0.0;
    let mut xbar = DMatrix::zeros(d, d);
    xbar[(0, 1)] = n.sqrt() / 2.0;
    xbar[(1, 0)] = n.sqrt() / 2.0;
    let mut xxbar = DMatrix::from_diagonal_element(d, d, -0.25);
    xxbar[(0, 0)] = (n - 1.0) / 4.0;
    xxbar[(1, 1)] = 0.0;
    Ok(RestrictedOps { zbar, xbar, xxbar })
}

/// `B(w_eff, √n_c·x) ⊕ -(w + jxx/4)·I_(n_c-1)`.
pub fn single_clique_hamiltonian(w: f64, n_c: usize, x: f64, jxx: f64) -> Result<DenseSymMatrix> {
    if n_c < 1 {
        return Err(Error::InvalidParameter("n_c must be at least 1".into()));
    }
    if ![w, x, jxx].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter("parameters must be finite".into()));
    }
    let w_eff = w - (n_c as f64 - 1.0) * jxx / 4.0;
    let b = basic_matrix(w_eff, (n_c as f64).sqrt() * x).into_inner();
    let rest = DMatrix::from_diagonal_element(n_c - 1, n_c - 1, -(w + jxx / 4.0));
    Ok(DenseSymMatrix::from_symmetric(direct_sum(&[&b, &rest])))
}

/// `⟨N_a| O |N_b⟩` for an operator given by its action on full basis states.
fn project(n_c: usize, apply: impl Fn(usize) -> Vec<(usize, f64)>) -> DMatrix<f64> {
    let state = |a: usize| if a == 0 { 0usize } else { 1 << (a - 1) };
    let d = n_c + 1;
    let mut m = DMatrix::zeros(d, d);
    for b in 0..d {
        for (s, amp) in apply(state(b)) {
            if s == 0 {
                m[(0, b)] += amp;
            } else if s.count_ones() == 1 {
                m[(s.trailing_zeros() as usize + 1, b)] += amp;
            }
        }
    }
    m
}

/// Max entrywise deviation between the conjugated full-space clique
/// operators and their closed forms.
///
/// Builds `Σž`, `½Σσ^x`, `¼Σσ^xσ^x` and the clique Hamiltonian on all
/// `2^nc` states, projects onto the independent-set subspace and conjugates
/// by the basis change: `X̄ = U Π X Π Uᵀ`.
pub fn verify_clique_conjugation(w: f64, n_c: usize, x: f64, jxx: f64) -> Result<f64> {
    if n_c > CONJUGATION_MAX_NC {
        return Err(Error::TooLarge {
            what: "clique for full conjugation",
            size: n_c,
            limit: CONJUGATION_MAX_NC,
        });
    }
    let basis = build_clique_basis(n_c)?;
    let closed = restricted_operators(n_c)?;
    let sz = |s: usize| vec![(s, s.count_ones() as f64)];
    let sx = |s: usize| (0..n_c).map(|i| (s ^ 1 << i, 0.5)).collect::<Vec<_>>();
    let sxx = |s: usize| {
        let mut out = Vec::new();
        for i in 0..n_c {
            for j in i + 1..n_c {
                out.push((s ^ 1 << i ^ 1 << j, 0.25));
            }
        }
        out
    };
    let bar = |m: DMatrix<f64>| &basis.u * m * basis.u.transpose();
    let zbar = bar(project(n_c, sz));
    let xbar = bar(project(n_c, sx));
    let xxbar = bar(project(n_c, sxx));
    let h = bar(project(n_c, |s| {
        let mut out: Vec<(usize, f64)> = sx(s).into_iter().map(|(t, a)| (t, -x * a)).collect();
        out.extend(sz(s).into_iter().map(|(t, a)| (t, -w * a)));
        out.extend(sxx(s).into_iter().map(|(t, a)| (t, jxx * a)));
        out
    }));
    let hsc = single_clique_hamiltonian(w, n_c, x, jxx)?;
    Ok([
        max_abs_diff(&zbar, &closed.zbar),
        max_abs_diff(&xbar, &closed.xbar),
        max_abs_diff(&xxbar, &closed.xxbar),
        max_abs_diff(&h, hsc.as_matrix()),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}
