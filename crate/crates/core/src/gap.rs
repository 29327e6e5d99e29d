//! Effective two-level reduction onto `P = span{L̄_0, R̄_0}`, the gap
//! estimate `2|e0|g0`, the chain of exact gaps and the scaling experiment.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::bare::{bare_energy, co, find_crossing, ground_difference, CrossingPoint, Subsystem};
use crate::error::{Error, Result};
use crate::gevp::{build_gevp, GevpSystem};
use crate::instance::InstanceSpec;
use crate::linalg::{eigenvalues, symmetric_eigen, symmetric_function};
use crate::oracle::{
    build_full_hamiltonian, build_low_energy_hamiltonian, lowest_gap, scan_gap, GapScan,
    FULL_MAX_N, GOLDEN_REL_TOL,
};
use crate::symmetric::{assemble_hc_sym, build_core};

/// Relative threshold below which `e0 - e_q` counts as degenerate.
const COMPLEMENT_TOL: f64 = 1e-12;
/// Largest admissible relative error of the certificate.
pub const CERTIFICATE_TOL: f64 = 0.25;
/// `|e_L0 - e_R0| ≤ factor·|e0|·g0` defines the certificate window.
pub const CERTIFICATE_FACTOR: f64 = 4.0;
/// `|e_L0 - e_R0| ≤ factor·|e0|·g0` defines "near the anti-crossing".
pub const NEAR_FACTOR: f64 = 10.0;

/// 2×2 effective Hamiltonian on `{L̄_0, R̄_0}` (in that order).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveTwoLevel {
    pub x: f64,
    pub e0: f64,
    /// `⟨L̄_0|R̄_0⟩` at `x`.
    pub g0: f64,
    pub h_pp: DMatrix<f64>,
    pub s_pp: DMatrix<f64>,
    /// `X D⁻¹ Xᵀ` with `X = e0 S_PQ - H_PQ`, `D = diag(e0 - e_q)`.
    pub w1: DMatrix<f64>,
    /// `X D⁻¹ V D⁻¹ Xᵀ` with `V = ΔH_QQ - e0 ΔI_QQ`.
    pub w2: DMatrix<f64>,
    /// `H_PP + W1 + W2`, generalized form against `s_pp`.
    pub h_eff0: DMatrix<f64>,
    /// `s_pp⁻¹ h_eff0`.
    pub h_eff: DMatrix<f64>,
    /// Diagonal of `W1`.
    pub a1: [f64; 2],
    /// Off-diagonal of `W2`.
    pub c2: f64,
    /// Eigenvalues of the pencil `(h_eff0, s_pp)`.
    pub eigenvalues: [f64; 2],
    pub gap: f64,
    /// The unexpanded complement `H_PP + X(e0 S_QQ - H_QQ)⁻¹Xᵀ`, when
    /// `e0 S_QQ - H_QQ` is numerically invertible.
    pub schur_exact: Option<DMatrix<f64>>,
}

fn pencil_eigenvalues(h: &DMatrix<f64>, s: &DMatrix<f64>) -> Result<Vec<f64>> {
    let s_inv_half = symmetric_function(s, |v| 1.0 / v.sqrt())?;
    let a = &s_inv_half * h * &s_inv_half;
    Ok(symmetric_eigen(&((&a + a.transpose()) * 0.5))?.0)
}

/// Reduces the pencil of `sys` onto `P = {L̄_0, R̄_0}` at reference energy
/// `e0`, keeping the complement to second order in `ΔH - e0ΔI`.
pub fn schur_effective(sys: &GevpSystem, e0: f64) -> Result<EffectiveTwoLevel> {
    let p = [sys.l_index(0), sys.r_index(0)];
    let q: Vec<usize> = (0..sys.dim()).filter(|k| !p.contains(k)).collect();
    let h = sys.h_tilde.as_matrix();
    let s = sys.s_tilde.as_matrix();
    let e = sys.bare_energies();
    let scale = e0.abs().max(1.0);
    let mut d_inv = Vec::with_capacity(q.len());
    for &k in &q {
        let d = e0 - e[k];
        if d.abs() < COMPLEMENT_TOL * scale {
            return Err(Error::SingularComplement { level: k });
        }
        d_inv.push(1.0 / d);
    }
    let sub = |m: &DMatrix<f64>, rows: &[usize], cols: &[usize]| {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
    };
    let h_pp = sub(h, &p, &p);
    let s_pp = sub(s, &p, &p);
    let x_pq = e0 * sub(s, &p, &q) - sub(h, &p, &q);
    let d_inv = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d_inv));
    let v = sub(&sys.delta_h, &q, &q) - e0 * sub(&sys.delta_i, &q, &q);
    let xd = &x_pq * &d_inv;
    let w1 = &xd * x_pq.transpose();
    let w2 = &xd * &v * xd.transpose();
    let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
    let (w1, w2) = (sym(w1), sym(w2));
    let h_eff0 = &h_pp + &w1 + &w2;
    let s_inv = s_pp
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditioned { smallest: 0.0 })?;
    let h_eff = &s_inv * &h_eff0;
    let ev = pencil_eigenvalues(&h_eff0, &s_pp)?;

    let complement = e0 * sub(s, &q, &q) - sub(h, &q, &q);
    let (cv, _) = symmetric_eigen(&sym(complement.clone()))?;
    let smallest = cv.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let schur_exact = if smallest > 1e-10 * scale {
        complement
            .try_inverse()
            .map(|inv| sym(&h_pp + &x_pq * inv * x_pq.transpose()))
    } else {
        None
    };

    Ok(EffectiveTwoLevel {
        x: sys.x,
        e0,
        g0: s_pp[(0, 1)],
        a1: [w1[(0, 0)], w1[(1, 1)]],
        c2: w2[(0, 1)],
        h_pp,
        s_pp,
        w1,
        w2,
        h_eff0,
        h_eff,
        eigenvalues: [ev[0], ev[1]],
        gap: ev[1] - ev[0],
        schur_exact,
    })
}

/// Effective two-level Hamiltonian of `spec` at `x`, with `e0` the mean of
/// the two bare ground energies.
pub fn effective_at(spec: &InstanceSpec, x: f64) -> Result<EffectiveTwoLevel> {
    let e0 = 0.5 * (bare_energy(Subsystem::L, 0, x, spec) + bare_energy(Subsystem::R, 0, x, spec));
    schur_effective(&build_gevp(spec, x)?, e0)
}

/// Interval of `x` around `x_c` where `|e_L0 - e_R0| ≤ factor·|e0|·g0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiCrossingWindow {
    pub x_lo: f64,
    pub x_hi: f64,
    pub threshold: f64,
    pub crossing: CrossingPoint,
}

pub fn anti_crossing_window(spec: &InstanceSpec, factor: f64) -> Result<AntiCrossingWindow> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "window factor must be positive, got {factor}"
        )));
    }
    let cp = find_crossing(spec)?;
    let threshold = factor * cp.e0.abs() * cp.g0;
    let excess = |x: f64| ground_difference(spec, x).abs() - threshold;
    let edge = |far: f64| {
        if excess(far) <= 0.0 {
            far
        } else {
            crate::two_level::bisect(excess, cp.x_c.min(far), cp.x_c.max(far), 0.0)
        }
    };
    Ok(AntiCrossingWindow {
        x_lo: edge(crate::bare::CROSSING_BRACKET_LO),
        x_hi: edge(spec.gamma1()),
        threshold,
        crossing: cp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificatePoint {
    pub x: f64,
    pub core: [f64; 2],
    pub effective: [f64; 2],
    /// `core[1] - core[0]`.
    pub local_gap: f64,
    /// `max_i |core_i - effective_i| / local_gap`.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub window: AntiCrossingWindow,
    pub points: Vec<CertificatePoint>,
    pub worst_relative_error: f64,
    pub passed: bool,
}

/// Compares the two lowest `H_core` levels with the effective 2×2 pencil at
/// `samples` points across the window `|e_L0 - e_R0| ≤ 4|e0|g0`.
pub fn certificate(spec: &InstanceSpec, samples: usize) -> Result<Certificate> {
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "certificate needs at least two samples".into(),
        ));
    }
    let window = anti_crossing_window(spec, CERTIFICATE_FACTOR)?;
    let xs: Vec<f64> = (0..samples)
        .map(|i| window.x_lo + (window.x_hi - window.x_lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let points: Vec<CertificatePoint> = xs
        .par_iter()
        .map(|&x| {
            let core = eigenvalues(&build_core(spec, x).h_core)?;
            let eff = effective_at(spec, x)?;
            let local_gap = core[1] - core[0];
            let err = (core[0] - eff.eigenvalues[0])
                .abs()
                .max((core[1] - eff.eigenvalues[1]).abs());
            Ok(CertificatePoint {
                x,
                core: [core[0], core[1]],
                effective: eff.eigenvalues,
                local_gap,
                relative_error: err / local_gap,
            })
        })
        .collect::<Result<_>>()?;
    let worst = points.iter().map(|p| p.relative_error).fold(0.0, f64::max);
    Ok(Certificate {
        window,
        points,
        worst_relative_error: worst,
        passed: worst <= CERTIFICATE_TOL,
    })
}

/// Located minimum of one chain member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapMinimum {
    pub t: f64,
    pub x: f64,
    pub gap: f64,
    pub degenerate: bool,
}

impl GapMinimum {
    fn from_scan(spec: &InstanceSpec, scan: &GapScan) -> Self {
        Self {
            t: scan.t_star,
            x: spec.x_at(scan.t_star),
            gap: scan.gap_min,
            degenerate: scan.degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainOptions {
    /// Ascending grid of `t`.
    pub grid: Vec<f64>,
    /// Largest `n` for the full `2^n` Hamiltonian (capped at the dense limit).
    pub full_max_n: usize,
    /// Half-width in `t` of the window around the `H_C^sym` minimum in which
    /// the full Hamiltonian is scanned.
    pub full_window: f64,
    /// Grid points in that window.
    pub full_points: usize,
    pub rel_tol: f64,
}

impl ChainOptions {
    pub fn with_grid(grid: Vec<f64>) -> Self {
        Self {
            grid,
            ..Self::default()
        }
    }
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            grid: (0..=200).map(|i| i as f64 / 200.0).collect(),
            full_max_n: 14,
            full_window: 0.05,
            full_points: 11,
            rel_tol: GOLDEN_REL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub x_c: f64,
    pub t_c: f64,
    pub e0: f64,
    pub gamma_l: f64,
    pub gamma_r: f64,
    pub g0: f64,
    /// `2|e0|·g0`.
    pub gap_2x2: f64,
    pub gap_core: GapMinimum,
    pub gap_hc: GapMinimum,
    /// Clique-restricted full Hamiltonian, when it fits dense storage.
    pub gap_low: Option<GapMinimum>,
    pub gap_full: Option<GapMinimum>,
    /// `1/g0²`.
    pub runtime_bound: f64,
    pub policy: String,
}

impl GapReport {
    /// Minima of the exact chain members, narrowest first.
    pub fn exact_minima(&self) -> Vec<(&'static str, GapMinimum)> {
        let mut out = Vec::new();
        if let Some(m) = self.gap_full {
            out.push(("full", m));
        }
        if let Some(m) = self.gap_low {
            out.push(("low", m));
        }
        out.push(("hc", self.gap_hc));
        out.push(("core", self.gap_core));
        out
    }
}

fn window_grid(center: f64, half: f64, points: usize) -> Vec<f64> {
    let lo = (center - half).max(0.0);
    let hi = (center + half).min(1.0);
    let points = points.max(3);
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Minimum gaps of `H_core`, `H_C^sym`, the clique-restricted and the full
/// Hamiltonian along the schedule, plus the 2×2 estimate.
pub fn gap_chain(spec: &InstanceSpec, options: &ChainOptions) -> Result<GapReport> {
    let cp = find_crossing(spec)?;
    let grid = &options.grid;
    let tol = options.rel_tol;
    let core = scan_gap(
        |t| lowest_gap(&build_core(spec, spec.x_at(t)).h_core),
        grid,
        tol,
    )?;
    let hc = scan_gap(
        |t| lowest_gap(&assemble_hc_sym(spec, spec.x_at(t)).h_c_sym),
        grid,
        tol,
    )?;
    let low = match build_low_energy_hamiltonian(spec, 0.0) {
        Ok(_) => Some(scan_gap(
            |t| lowest_gap(&build_low_energy_hamiltonian(spec, spec.x_at(t))?.matrix),
            grid,
            tol,
        )?),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    let full_limit = options.full_max_n.min(FULL_MAX_N);
    let full = if spec.n() <= full_limit {
        let local = window_grid(hc.t_star, options.full_window, options.full_points);
        Some(scan_gap(
            |t| lowest_gap(&build_full_hamiltonian(spec, spec.x_at(t))?),
            &local,
            tol,
        )?)
    } else {
        None
    };
    let policy = format!(
        "full Hamiltonian for n <= {full_limit} (requested {}, dense limit {FULL_MAX_N}), scanned on \
         t within {} of the H_C^sym minimum; n = {}: {}",
        options.full_max_n,
        options.full_window,
        spec.n(),
        if full.is_some() { "computed" } else { "skipped" }
    );
    Ok(GapReport {
        x_c: cp.x_c,
        t_c: cp.t_c,
        e0: cp.e0,
        gamma_l: cp.gamma_l,
        gamma_r: cp.gamma_r,
        g0: cp.g0,
        gap_2x2: 2.0 * cp.e0.abs() * cp.g0,
        gap_core: GapMinimum::from_scan(spec, &core),
        gap_hc: GapMinimum::from_scan(spec, &hc),
        gap_low: low.as_ref().map(|s| GapMinimum::from_scan(spec, s)),
        gap_full: full.as_ref().map(|s| GapMinimum::from_scan(spec, s)),
        runtime_bound: cp.runtime_bound(),
        policy,
    })
}

/// Exact `H_core` minimum gap, scanned over the window
/// `|e_L0 - e_R0| ≤ 10|e0|g0` where the dip lives.
pub fn core_min_gap(spec: &InstanceSpec, points: usize) -> Result<GapMinimum> {
    let win = anti_crossing_window(spec, NEAR_FACTOR)?;
    let points = points.max(3);
    let xs: Vec<f64> = (0..points)
        .map(|i| win.x_lo + (win.x_hi - win.x_lo) * i as f64 / (points - 1) as f64)
        .collect();
    let scan = scan_gap(
        |x| lowest_gap(&build_core(spec, x).h_core),
        &xs,
        GOLDEN_REL_TOL,
    )?;
    Ok(GapMinimum {
        t: spec.t_at(scan.t_star),
        x: scan.t_star,
        gap: scan.gap_min,
        degenerate: scan.degenerate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub m_l: usize,
    pub m_r: usize,
    /// `m_l + m_r`.
    pub size: usize,
    pub x_c: f64,
    pub g0: f64,
    pub gap_2x2: f64,
    pub gap_core: f64,
    pub x_core: f64,
    pub ln_gap_core: f64,
    pub ln_gap_2x2: f64,
    pub ln_inv_g0_sq: f64,
    pub log2_inv_g0_sq: f64,
    /// `1/g0² > 2^(m_l + m_r)`.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub rows: Vec<ScalingRow>,
    /// Least-squares fit of `ln gap_core` against `size`; `None` when fewer
    /// than two distinct sizes are present.
    pub fit: Option<LineFit>,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(LineFit {
        slope,
        intercept,
        r2,
    })
}

/// Grid points used by [`scaling_experiment`] for each core scan.
pub const SCALING_POINTS: usize = 41;

pub fn scaling_experiment(family: &[InstanceSpec]) -> Result<ScalingFit> {
    let rows: Vec<ScalingRow> = family
        .par_iter()
        .map(|spec| {
            let cp = find_crossing(spec)?;
            let core = core_min_gap(spec, SCALING_POINTS)?;
            let gap_2x2 = 2.0 * cp.e0.abs() * cp.g0;
            let size = spec.m_l() + spec.m_r();
            let inv = cp.runtime_bound();
            Ok(ScalingRow {
                m_l: spec.m_l(),
                m_r: spec.m_r(),
                size,
                x_c: cp.x_c,
                g0: cp.g0,
                gap_2x2,
                gap_core: core.gap,
                x_core: core.x,
                ln_gap_core: core.gap.ln(),
                ln_gap_2x2: gap_2x2.ln(),
                ln_inv_g0_sq: inv.ln(),
                log2_inv_g0_sq: inv.log2(),
                bound_holds: inv.log2() > size as f64,
            })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.size as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ln_gap_core).collect();
    Ok(ScalingFit {
        fit: fit_line(&xs, &ys),
        rows,
    })
}

/// `⟨L̄_0|R̄_0⟩ = co(L_0)·co(R_0)` at `x`.
pub fn ground_overlap(spec: &InstanceSpec, x: f64) -> f64 {
    co(Subsystem::L, 0, x, spec) * co(Subsystem::R, 0, x, spec)
}

/// Two lowest `H_core` levels at `x`.
pub fn core_two_lowest(spec: &InstanceSpec, x: f64) -> Result<[f64; 2]> {
    let e = eigenvalues(&build_core(spec, x).h_core)?;
    Ok([e[0], e[1]])
}
