//! The padded bare-eigenstate pencil `(H̃, S̃)` of `H_core` and its
//! λ-interpolation `H + λΔH = e(λ)(I + λΔI)`.
//!
//! Basis order: `R̄_0 … R̄_(m_r)` then `L̄_0 … L̄_(m_l)`, each a
//! symmetric-subspace bare eigenstate padded into the core space. The two
//! families share the empty state, which makes `S̃` singular with a
//! one-dimensional null space.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bare::{bare_energy, co, dicke_co, ground_difference, Subsystem};
use crate::error::{Error, Result};
use crate::instance::InstanceSpec;
use crate::linalg::{exact_spectrum, symmetric_eigen, DenseSymMatrix};
use crate::symmetric::{build_core, h_l_bare, h_r_bare};

/// Overlap eigenvalues below this are treated as the null space.
pub const NULL_TOL: f64 = 1e-12;
/// Smallest admissible retained overlap eigenvalue.
pub const CONDITION_TOL: f64 = 1e-10;
/// Largest λ accepted by the quasi-interpolated family.
pub const LAMBDA_MAX: f64 = 1.0 - 1e-6;
/// Default separation required by [`second_order_correction`].
pub const DEFAULT_SEPARATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasisLabel {
    pub subsystem: Subsystem,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GevpSystem {
    pub x: f64,
    pub m_l: usize,
    pub m_r: usize,
    pub labels: Vec<BasisLabel>,
    /// Bare energies on the diagonal.
    pub h0: DMatrix<f64>,
    pub delta_h: DMatrix<f64>,
    pub delta_i: DMatrix<f64>,
    pub h_tilde: DenseSymMatrix,
    pub s_tilde: DenseSymMatrix,
}

impl GevpSystem {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn r_index(&self, j: usize) -> usize {
        j
    }

    pub fn l_index(&self, i: usize) -> usize {
        self.m_r + 1 + i
    }

    pub fn bare_energies(&self) -> Vec<f64> {
        self.h0.diagonal().iter().copied().collect()
    }

    /// `S_LR[i][j] = ⟨L̄_i|R̄_j⟩`.
    pub fn s_lr(&self) -> DMatrix<f64> {
        self.s_tilde
            .as_matrix()
            .view((self.m_r + 1, 0), (self.m_l + 1, self.m_r + 1))
            .into_owned()
    }

    /// `H_LR[i][j] = ⟨L̄_i|H_core|R̄_j⟩`.
    pub fn h_lr(&self) -> DMatrix<f64> {
        self.h_tilde
            .as_matrix()
            .view((self.m_r + 1, 0), (self.m_l + 1, self.m_r + 1))
            .into_owned()
    }
}

fn labels(m_l: usize, m_r: usize) -> Vec<BasisLabel> {
    (0..=m_r)
        .map(|k| BasisLabel {
            subsystem: Subsystem::R,
            k,
        })
        .chain((0..=m_l).map(|k| BasisLabel {
            subsystem: Subsystem::L,
            k,
        }))
        .collect()
}

fn assemble(x: f64, m_l: usize, m_r: usize, h0: DMatrix<f64>, cross_s: DMatrix<f64>) -> GevpSystem {
    let d = m_l + m_r + 2;
    let e = h0.diagonal();
    let mut delta_i = DMatrix::zeros(d, d);
    let mut delta_h = DMatrix::zeros(d, d);
    for i in 0..=m_l {
        for j in 0..=m_r {
            let (li, rj) = (m_r + 1 + i, j);
            let s = cross_s[(i, j)];
            let h = (e[li] + e[rj]) * s;
            delta_i[(li, rj)] = s;
            delta_i[(rj, li)] = s;
            delta_h[(li, rj)] = h;
            delta_h[(rj, li)] = h;
        }
    }
    let h_tilde = DenseSymMatrix::from_symmetric(&h0 + &delta_h);
    let s_tilde = DenseSymMatrix::from_symmetric(DMatrix::identity(d, d) + &delta_i);
    GevpSystem {
        x,
        m_l,
        m_r,
        labels: labels(m_l, m_r),
        h0,
        delta_h,
        delta_i,
        h_tilde,
        s_tilde,
    }
}

/// Closed-form pencil: `S_LR[i][j] = √C(m_l,i)co(L_i) · √C(m_r,j)co(R_j)` and
/// `H_LR[i][j] = (e_(L_i) + e_(R_j))·S_LR[i][j]`.
pub fn build_gevp(spec: &InstanceSpec, x: f64) -> Result<GevpSystem> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidParameter(format!("x must be >= 0, got {x}")));
    }
    let (m_l, m_r) = (spec.m_l(), spec.m_r());
    let energies: Vec<f64> = (0..=m_r)
        .map(|k| bare_energy(Subsystem::R, k, x, spec))
        .chain((0..=m_l).map(|k| bare_energy(Subsystem::L, k, x, spec)))
        .collect();
    let h0 = DMatrix::from_diagonal(&DVector::from_vec(energies));
    let cross = DMatrix::from_fn(m_l + 1, m_r + 1, |i, j| {
        dicke_co(Subsystem::L, i, x, spec) * dicke_co(Subsystem::R, j, x, spec)
    });
    Ok(assemble(x, m_l, m_r, h0, cross))
}

/// Padded bare eigenvectors (columns, GEVP basis order) from the numeric
/// eigensystems of `H_L^bare` and `H_R^bare`, with the empty-state amplitude
/// made non-negative.
pub fn padded_bare_vectors(spec: &InstanceSpec, x: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let (m_l, m_r) = (spec.m_l(), spec.m_r());
    let (el, vl) = symmetric_eigen(&h_l_bare(spec, x))?;
    let (er, vr) = symmetric_eigen(&h_r_bare(spec, x))?;
    let d_core = m_l + m_r + 1;
    let mut pad = DMatrix::zeros(d_core, m_l + m_r + 2);
    // R level j: Dicke index k holds m_r - k occupied sites.
    for j in 0..=m_r {
        let sign = if vr[(m_r, j)] < 0.0 { -1.0 } else { 1.0 };
        for k in 0..=m_r {
            let count = m_r - k;
            let row = if count == 0 { m_l } else { m_l + count };
            pad[(row, j)] = sign * vr[(k, j)];
        }
    }
    for i in 0..=m_l {
        let sign = if vl[(m_l, i)] < 0.0 { -1.0 } else { 1.0 };
        for k in 0..=m_l {
            pad[(k, m_r + 1 + i)] = sign * vl[(k, i)];
        }
    }
    let energies = er.into_iter().chain(el).collect();
    Ok((energies, pad))
}

/// Pencil assembled from explicit padded vectors: Gram and Rayleigh matrices
/// of `H_core` in the padded basis.
pub fn build_gevp_explicit(spec: &InstanceSpec, x: f64) -> Result<GevpSystem> {
    let (m_l, m_r) = (spec.m_l(), spec.m_r());
    let (energies, v) = padded_bare_vectors(spec, x)?;
    let core = build_core(spec, x);
    let s = v.transpose() * &v;
    let h = v.transpose() * core.h_core.as_matrix() * &v;
    let d = m_l + m_r + 2;
    let h0 = DMatrix::from_diagonal(&DVector::from_vec(energies));
    let delta_h = &h - &h0;
    let delta_i = &s - DMatrix::identity(d, d);
    let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
    Ok(GevpSystem {
        x,
        m_l,
        m_r,
        labels: labels(m_l, m_r),
        h0,
        delta_h: sym(delta_h),
        delta_i: sym(delta_i),
        h_tilde: DenseSymMatrix::from_symmetric(sym(h)),
        s_tilde: DenseSymMatrix::from_symmetric(sym(s)),
    })
}

/// Deflated eigenvalues of the pencil together with the deflated rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GevpSolution {
    pub eigenvalues: Vec<f64>,
    pub null_dim: usize,
    /// Smallest retained eigenvalue of `S̃`.
    pub smallest_retained: f64,
}

/// Projects out the null space of `S̃` and solves the reduced
/// symmetric-definite problem.
pub fn solve_gevp_full(sys: &GevpSystem) -> Result<GevpSolution> {
    let (sigma, v) = symmetric_eigen(sys.s_tilde.as_matrix())?;
    let scale = sigma.last().copied().unwrap_or(1.0).max(1.0);
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&k| sigma[k] > NULL_TOL * scale)
        .collect();
    let smallest = keep.iter().map(|&k| sigma[k]).fold(f64::INFINITY, f64::min);
    if smallest < CONDITION_TOL * scale {
        return Err(Error::IllConditioned { smallest });
    }
    let d = sys.dim();
    let basis = DMatrix::from_fn(d, keep.len(), |i, c| {
        v[(i, keep[c])] / sigma[keep[c]].sqrt()
    });
    let reduced = basis.transpose() * sys.h_tilde.as_matrix() * &basis;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let (values, _) = symmetric_eigen(&reduced)?;
    Ok(GevpSolution {
        eigenvalues: values,
        null_dim: d - keep.len(),
        smallest_retained: smallest,
    })
}

/// Eigenvalues of the deflated pencil; equal to `eig(H_core)`.
pub fn solve_gevp(sys: &GevpSystem) -> Result<Vec<f64>> {
    Ok(solve_gevp_full(sys)?.eigenvalues)
}

/// Analytic common null vector of `S̃` and `H̃`:
/// `(√C co(R_j))_j ⊕ (-√C co(L_i))_i`, normalized.
pub fn null_vector(spec: &InstanceSpec, x: f64) -> DVector<f64> {
    let (m_l, m_r) = (spec.m_l(), spec.m_r());
    let v: Vec<f64> = (0..=m_r)
        .map(|j| dicke_co(Subsystem::R, j, x, spec))
        .chain((0..=m_l).map(|i| -dicke_co(Subsystem::L, i, x, spec)))
        .collect();
    let v = DVector::from_vec(v);
    let n = v.norm();
    v / n
}

/// One point of the quasi-interpolated family.
#[derive(Debug, Clone, PartialEq)]
pub struct QiPoint {
    pub lambda: f64,
    /// `T(λ) = (I + λΔI)^(-1/2)`.
    pub t: DMatrix<f64>,
    /// `T(λ)^(-1)`.
    pub t_inv: DMatrix<f64>,
    /// `T(λ)(H + λΔH)T(λ)`.
    pub h_qi: DenseSymMatrix,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

pub fn quasi_interpolated(sys: &GevpSystem, lambda: f64) -> Result<QiPoint> {
    if !(0.0..=LAMBDA_MAX).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "λ must lie in [0, {LAMBDA_MAX}], got {lambda}"
        )));
    }
    let d = sys.dim();
    let i_lambda = DMatrix::identity(d, d) + lambda * &sys.delta_i;
    let (sigma, v) = symmetric_eigen(&i_lambda)?;
    let smallest = sigma.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest < 0.5 * (1.0 - LAMBDA_MAX) {
        return Err(Error::IllConditioned { smallest });
    }
    let scaled = |p: f64| {
        let diag =
            DMatrix::from_diagonal(&DVector::from_iterator(d, sigma.iter().map(|s| s.powf(p))));
        &v * diag * v.transpose()
    };
    let t = scaled(-0.5);
    let t_inv = scaled(0.5);
    let h = &sys.h0 + lambda * &sys.delta_h;
    let h_qi = &t * h * &t;
    let h_qi = DenseSymMatrix::from_symmetric((&h_qi + h_qi.transpose()) * 0.5);
    let spectrum = exact_spectrum(&h_qi, d)?;
    Ok(QiPoint {
        lambda,
        t,
        t_inv,
        h_qi,
        eigenvalues: spectrum.eigenvalues,
        eigenvectors: spectrum.eigenvectors,
    })
}

/// Eigenvalue paths `e_n(λ)` continued by eigenvector overlap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaPaths {
    pub lambdas: Vec<f64>,
    /// `paths[n][s]` is `e_n` at `lambdas[s]`; path `n` starts at basis
    /// state `n` when the grid starts at λ = 0.
    pub paths: Vec<Vec<f64>>,
    /// Eigenvector index of each path at the last grid point.
    pub final_index: Vec<usize>,
    /// Smallest matched overlap; values near 1 mean unambiguous continuation.
    pub min_overlap: f64,
}

/// Greedy max-overlap assignment of new eigenvectors to tracked ones.
fn match_vectors(prev: &DMatrix<f64>, next: &DMatrix<f64>) -> (Vec<usize>, f64) {
    let d = prev.ncols();
    let overlaps = prev.transpose() * next;
    let mut pairs: Vec<(usize, usize, f64)> = (0..d)
        .flat_map(|p| (0..d).map(move |q| (p, q)))
        .map(|(p, q)| (p, q, overlaps[(p, q)].abs()))
        .collect();
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut assigned = vec![usize::MAX; d];
    let mut taken = vec![false; d];
    let mut worst = f64::INFINITY;
    for (p, q, o) in pairs {
        if assigned[p] == usize::MAX && !taken[q] {
            assigned[p] = q;
            taken[q] = true;
            worst = worst.min(o);
        }
    }
    (assigned, worst)
}

pub fn lambda_path(sys: &GevpSystem, grid: &[f64]) -> Result<LambdaPaths> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty λ grid".into()));
    }
    let d = sys.dim();
    let first = quasi_interpolated(sys, grid[0])?;
    // Path n follows eigenvector `index[n]`; at λ = 0 these are unit vectors.
    let mut index: Vec<usize> = if grid[0] == 0.0 {
        (0..d)
            .map(|n| {
                (0..d)
                    .max_by(|&a, &b| {
                        first.eigenvectors[(n, a)]
                            .abs()
                            .total_cmp(&first.eigenvectors[(n, b)].abs())
                    })
                    .expect("non-empty")
            })
            .collect()
    } else {
        (0..d).collect()
    };
    let mut paths: Vec<Vec<f64>> = index.iter().map(|&q| vec![first.eigenvalues[q]]).collect();
    let mut tracked = DMatrix::from_fn(d, d, |i, n| first.eigenvectors[(i, index[n])]);
    let mut min_overlap = 1.0f64;
    for &lambda in &grid[1..] {
        let point = quasi_interpolated(sys, lambda)?;
        let (assigned, worst) = match_vectors(&tracked, &point.eigenvectors);
        min_overlap = min_overlap.min(worst);
        index = assigned;
        for (n, path) in paths.iter_mut().enumerate() {
            path.push(point.eigenvalues[index[n]]);
        }
        tracked = DMatrix::from_fn(d, d, |i, n| point.eigenvectors[(i, index[n])]);
    }
    Ok(LambdaPaths {
        lambdas: grid.to_vec(),
        paths,
        final_index: index,
        min_overlap,
    })
}

/// Residuals of the eigenvalue-deformation identity for one bare level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationResidual {
    pub n: usize,
    pub e_n: f64,
    pub e_lambda: f64,
    /// `e_n(λ) - e_n - λ⟨e_n|T(ΔH - e_nΔI)T|φ⟩ / ⟨e_n|φ⟩` with `φ` the
    /// `H_QI` eigenvector.
    pub literal: f64,
    /// `e_n(λ) - e_n - λ⟨e_n|(ΔH - e_nΔI)T|φ⟩ / ⟨e_n|T⁻¹|φ⟩`, which is exact
    /// because `T⁻¹|e_n⟩` is the vector annihilated by
    /// `T(H + λe_nΔI)T - e_n`.
    pub corrected: f64,
}

/// Deformation residuals at `lambda`, following each level from λ = 0 over
/// `steps` continuation steps.
pub fn deformation_residuals(
    sys: &GevpSystem,
    lambda: f64,
    steps: usize,
) -> Result<Vec<DeformationResidual>> {
    let steps = steps.max(1);
    let grid: Vec<f64> = (0..=steps)
        .map(|s| lambda * s as f64 / steps as f64)
        .collect();
    let paths = lambda_path(sys, &grid)?;
    let point = quasi_interpolated(sys, lambda)?;
    let e = sys.bare_energies();
    Ok((0..sys.dim())
        .map(|n| {
            let phi = point.eigenvectors.column(paths.final_index[n]).into_owned();
            let e_lambda = point.eigenvalues[paths.final_index[n]];
            let m = &sys.delta_h - e[n] * &sys.delta_i;
            let lit_num = (&point.t * &m * &point.t * &phi)[n];
            let lit = e_lambda - e[n] - lambda * lit_num / phi[n];
            let cor_num = (&m * &point.t * &phi)[n];
            let cor_den = (&point.t_inv * &phi)[n];
            let cor = e_lambda - e[n] - lambda * cor_num / cor_den;
            DeformationResidual {
                n,
                e_n: e[n],
                e_lambda,
                literal: lit,
                corrected: cor,
            }
        })
        .collect())
}

/// Second-order estimate of `e_n(1) - e_n`:
/// `⟨e_n|(ΔH - e_nΔI)ΔI|e_n⟩ - Σ_(k≠n) ⟨e_n|ΔH - e_nΔI|e_k⟩⟨e_k|ΔH|e_n⟩/(e_k - e_n)`.
pub fn second_order_correction(sys: &GevpSystem, n: usize, separation: f64) -> Result<f64> {
    let d = sys.dim();
    if n >= d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: n,
        });
    }
    let e = sys.bare_energies();
    let gap = (0..d)
        .filter(|&k| k != n)
        .map(|k| (e[k] - e[n]).abs())
        .fold(f64::INFINITY, f64::min);
    if gap < separation {
        return Err(Error::NearDegenerate {
            level: n,
            separation: gap,
            threshold: separation,
        });
    }
    let m = &sys.delta_h - e[n] * &sys.delta_i;
    let first: f64 = (0..d).map(|k| m[(n, k)] * sys.delta_i[(k, n)]).sum();
    let second: f64 = (0..d)
        .filter(|&k| k != n)
        .map(|k| m[(n, k)] * sys.delta_h[(k, n)] / (e[k] - e[n]))
        .sum();
    Ok(first - second)
}

/// Which side of the anti-crossing the ground state is expanded on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Large field: `e_(L_0) < e_(R_0)`, ground state near `L̄_0`.
    BeforeAC,
    /// Small field: `e_(R_0) < e_(L_0)`, ground state near `R̄_0`.
    AfterAC,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExplicitCorrection {
    pub side: Side,
    /// Bare ground energy the correction is relative to.
    pub reference: f64,
    pub estimate: f64,
    /// `E0(H_core) - reference`.
    pub exact: f64,
}

/// Regime threshold on `|e_(L_0) - e_(R_0)|`, in units of `w`.
pub const EXPLICIT_THRESHOLD: f64 = 1.0;

/// First-order ground-energy shift away from the anti-crossing:
/// before it, `E0 - e_(L_0) ≈ -2e_(L_0) Σ_j e_(R_j)/(e_(R_j) - e_(L_0))·⟨L̄_0|R̄_j⟩²`;
/// after it, the same with L and R exchanged.
pub fn explicit_ground_correction(
    spec: &InstanceSpec,
    x: f64,
    side: Side,
) -> Result<ExplicitCorrection> {
    let diff = ground_difference(spec, x);
    let threshold = EXPLICIT_THRESHOLD * spec.w();
    if diff.abs() <= threshold {
        return Err(Error::TooCloseToCrossing {
            difference: diff.abs(),
            threshold,
        });
    }
    let (own, other) = match side {
        Side::BeforeAC => (Subsystem::L, Subsystem::R),
        Side::AfterAC => (Subsystem::R, Subsystem::L),
    };
    let lower_is_own = match side {
        Side::BeforeAC => diff < 0.0,
        Side::AfterAC => diff > 0.0,
    };
    if !lower_is_own {
        return Err(Error::InvalidParameter(format!(
            "{own:?}_0 is not the lower bare ground state at x = {x}"
        )));
    }
    let m_other = match other {
        Subsystem::L => spec.m_l(),
        Subsystem::R => spec.m_r(),
    };
    let e_ref = bare_energy(own, 0, x, spec);
    let co_ref = co(own, 0, x, spec);
    let sum: f64 = (0..=m_other)
        .map(|j| {
            let e_j = bare_energy(other, j, x, spec);
            let s = co_ref * dicke_co(other, j, x, spec);
            e_j / (e_j - e_ref) * s * s
        })
        .sum();
    let e0 = crate::linalg::eigenvalues(&build_core(spec, x).h_core)?[0];
    Ok(ExplicitCorrection {
        side,
        reference: e_ref,
        estimate: -2.0 * e_ref * sum,
        exact: e0 - e_ref,
    })
}

/// `max |ΔIΔH - ΔHΔI|`.
pub fn commutator_residual(sys: &GevpSystem) -> f64 {
    let a = &sys.delta_i * &sys.delta_h;
    let b = &sys.delta_h * &sys.delta_i;
    (a - b).amax()
}

/// `(‖S̃v‖∞, ‖H̃v‖∞)` for the analytic null vector `v`.
pub fn null_residuals(sys: &GevpSystem, spec: &InstanceSpec) -> (f64, f64) {
    let v = null_vector(spec, sys.x);
    (
        (sys.s_tilde.as_matrix() * &v).amax(),
        (sys.h_tilde.as_matrix() * &v).amax(),
    )
}
