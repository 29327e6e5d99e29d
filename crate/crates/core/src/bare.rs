//! Closed-form spectra of the decoupled subsystems `H_L^bare`, `H_R^bare`.
//!
//! Each subsystem is `m_A` independent copies of `B(w_A, √n_A·x)`, with
//! `(m_L, n_L, w_L) = (m_l, n_c, w_eff)` and `(m_R, n_R, w_R) = (m_r, 1, w)`.
//! Level `k` has `k` local excitations and degeneracy `C(m_A, k)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::InstanceSpec;
use crate::two_level::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subsystem {
    L,
    R,
}

/// `(m_A, n_A, w_A)` of a subsystem.
pub fn subsystem_params(a: Subsystem, spec: &InstanceSpec) -> (usize, f64, f64) {
    match a {
        Subsystem::L => (spec.m_l(), spec.n_c() as f64, spec.w_eff()),
        Subsystem::R => (spec.m_r(), 1.0, spec.w()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BareLevel {
    pub subsystem: Subsystem,
    pub k: usize,
    pub energy: f64,
    pub multiplicity: f64,
    /// Overlap of one product eigenstate with the all-empty state.
    pub co: f64,
}

/// `C(m, k)` as a float.
pub fn binomial(m: usize, k: usize) -> f64 {
    if k > m {
        return 0.0;
    }
    let k = k.min(m - k);
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

fn gamma_of(w: f64, y: f64) -> f64 {
    let r = w.hypot(y);
    if w >= 0.0 {
        y / (w + r)
    } else {
        (r - w) / y
    }
}

/// `e_(A_k)(x) = -(m_A/2·w_A + (m_A/2 - k)·√(w_A² + n_A x²))`.
pub fn bare_energy(a: Subsystem, k: usize, x: f64, spec: &InstanceSpec) -> f64 {
    let (m, n, w) = subsystem_params(a, spec);
    let half = m as f64 / 2.0;
    -(half * w + (half - k as f64) * w.hypot(n.sqrt() * x))
}

/// `γ_A = √n_A·x / (w_A + √(w_A² + n_A x²))`.
pub fn gamma_mix(a: Subsystem, x: f64, spec: &InstanceSpec) -> f64 {
    let (_, n, w) = subsystem_params(a, spec);
    gamma_of(w, n.sqrt() * x)
}

/// `co(A_k) = (1 + γ²)^(-m/2) · γ^(m-k)`.
pub fn co(a: Subsystem, k: usize, x: f64, spec: &InstanceSpec) -> f64 {
    let (m, _, _) = subsystem_params(a, spec);
    let g = gamma_mix(a, x, spec);
    (1.0 + g * g).powf(-(m as f64) / 2.0) * g.powi((m - k) as i32)
}

/// Overlap of the symmetric-subspace level `k` with the empty state,
/// `√C(m_A, k) · co(A_k)`.
pub fn dicke_co(a: Subsystem, k: usize, x: f64, spec: &InstanceSpec) -> f64 {
    let (m, _, _) = subsystem_params(a, spec);
    binomial(m, k).sqrt() * co(a, k, x, spec)
}

pub fn bare_levels(a: Subsystem, x: f64, spec: &InstanceSpec) -> Vec<BareLevel> {
    let (m, _, _) = subsystem_params(a, spec);
    (0..=m)
        .map(|k| BareLevel {
            subsystem: a,
            k,
            energy: bare_energy(a, k, x, spec),
            multiplicity: binomial(m, k),
            co: co(a, k, x, spec),
        })
        .collect()
}

/// `|(1-γ²)/(1+γ²) - w/√(w² + n x²)|`; at `w = 1` the right side is
/// `1/√(1 + n x²)`.
pub fn ratio_identity_residual(n: f64, w: f64, x: f64) -> f64 {
    let g = gamma_of(w, n.sqrt() * x);
    let lhs = (1.0 - g * g) / (1.0 + g * g);
    (lhs - w / w.hypot(n.sqrt() * x)).abs()
}

/// `|Σ_k C(m,k)·e_k·co_k²|` for `m` copies of `B(w, √n·x)`.
pub fn weighted_sum_residual(m: usize, n: f64, w: f64, x: f64) -> f64 {
    let r = w.hypot(n.sqrt() * x);
    let g = gamma_of(w, n.sqrt() * x);
    let half = m as f64 / 2.0;
    let norm = (1.0 + g * g).powf(-(m as f64));
    (0..=m)
        .map(|k| {
            let e = -(half * w + (half - k as f64) * r);
            binomial(m, k) * e * norm * g.powi(2 * (m - k) as i32)
        })
        .sum::<f64>()
        .abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub ratio_l: f64,
    pub ratio_r: f64,
    pub weighted_sum_l: f64,
    pub weighted_sum_r: f64,
}

/// Both combinatorial identities for each subsystem of `spec` at `x`.
pub fn identity_checks(spec: &InstanceSpec, x: f64) -> IdentityResiduals {
    let (m_l, n_l, w_l) = subsystem_params(Subsystem::L, spec);
    let (m_r, n_r, w_r) = subsystem_params(Subsystem::R, spec);
    IdentityResiduals {
        ratio_l: ratio_identity_residual(n_l, w_l, x),
        ratio_r: ratio_identity_residual(n_r, w_r, x),
        weighted_sum_l: weighted_sum_residual(m_l, n_l, w_l, x),
        weighted_sum_r: weighted_sum_residual(m_r, n_r, w_r, x),
    }
}

/// Lower end of the crossing bracket.
pub const CROSSING_BRACKET_LO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingPoint {
    pub x_c: f64,
    pub t_c: f64,
    /// `e_(L_0)(x_c) = e_(R_0)(x_c)`.
    pub e0: f64,
    /// `co(L_0)·co(R_0)` at `x_c`.
    pub g0: f64,
    pub gamma_l: f64,
    pub gamma_r: f64,
    /// `|e_(L_0)(x_c) - e_(R_0)(x_c)|`.
    pub residual: f64,
}

impl CrossingPoint {
    /// `1/g0²`.
    pub fn runtime_bound(&self) -> f64 {
        1.0 / (self.g0 * self.g0)
    }
}

/// `e_(L_0)(x) - e_(R_0)(x)`.
pub fn ground_difference(spec: &InstanceSpec, x: f64) -> f64 {
    bare_energy(Subsystem::L, 0, x, spec) - bare_energy(Subsystem::R, 0, x, spec)
}

/// Bisection for `e_(L_0)(x_c) = e_(R_0)(x_c)` on `(1e-6, Γ1]`.
pub fn find_crossing(spec: &InstanceSpec) -> Result<CrossingPoint> {
    if !spec.crossing_regime() {
        return Err(Error::NoCrossing(format!(
            "m_l = {}, n_c = {}, m_r = {} is outside m_l < m_r < m_l·√n_c",
            spec.m_l(),
            spec.n_c(),
            spec.m_r()
        )));
    }
    let f = |x: f64| ground_difference(spec, x);
    let (lo, hi) = (CROSSING_BRACKET_LO, spec.gamma1());
    if hi <= lo || f(lo).signum() == f(hi).signum() {
        return Err(Error::NoCrossing(format!(
            "no sign change of e_L0 - e_R0 on ({lo}, {hi}]"
        )));
    }
    let x_c = bisect(f, lo, hi, 0.0);
    let residual = f(x_c).abs();
    if residual > 1e-10 {
        return Err(Error::NoCrossing(format!(
            "bisection residual {residual:e}"
        )));
    }
    Ok(CrossingPoint {
        x_c,
        t_c: spec.t_at(x_c),
        e0: bare_energy(Subsystem::L, 0, x_c, spec),
        g0: co(Subsystem::L, 0, x_c, spec) * co(Subsystem::R, 0, x_c, spec),
        gamma_l: gamma_mix(Subsystem::L, x_c, spec),
        gamma_r: gamma_mix(Subsystem::R, x_c, spec),
        residual,
    })
}
