//! One function per experiment; each returns the tables it produces.

use anticross_core::bare::{bare_energy, identity_checks};
use anticross_core::clique::{verify_clique_conjugation, CONJUGATION_MAX_NC};
use anticross_core::gap::{certificate, CERTIFICATE_TOL, SCALING_POINTS};
use anticross_core::gevp::{deformation_residuals, lambda_path, LAMBDA_MAX};
use anticross_core::linalg::MAX_DENSE_DIM;
use anticross_core::linalg::{eigenvalues, exact_spectrum, sign_aligned_distance, symmetric_eigen};
use anticross_core::oracle::{
    build_low_energy_hamiltonian, lowest_gap, scan_gap, FULL_MAX_N, GOLDEN_REL_TOL,
};
use anticross_core::symmetric::block_projection;
use anticross_core::two_level::basic_matrix;
use anticross_core::{
    assemble_hc_sym, build_core, build_full_hamiltonian, build_gevp, build_instance, classify_sign,
    find_crossing, scaling_experiment, solve_b, solve_gevp, InstanceSpec, Sign, Subsystem,
};
use anyhow::{Context, Result};
use serde_json::json;

use crate::artifact::{Cell, Table};
use crate::config::{RunConfig, DEFAULT_K, DEFAULT_LAMBDA_STEPS};

/// Resolved settings shared by all experiments.
pub struct Run {
    pub config: RunConfig,
    pub spec: InstanceSpec,
    pub ts: Vec<f64>,
    pub full_oracle_max_n: usize,
}

impl Run {
    fn x(&self, t: f64) -> f64 {
        self.spec.x_at(t)
    }

    /// The full Hamiltonian is used when both the requested and the dense
    /// storage limits allow it.
    fn full_allowed(&self) -> bool {
        self.spec.n() <= self.full_oracle_max_n.min(FULL_MAX_N)
    }

    fn low_allowed(&self) -> bool {
        let (n_c, m_l, m_r) = (self.spec.n_c(), self.spec.m_l(), self.spec.m_r());
        (n_c + 1)
            .checked_pow(m_l as u32)
            .and_then(|d| d.checked_mul(1usize.checked_shl(m_r as u32)?))
            .is_some_and(|d| d <= MAX_DENSE_DIM)
    }

    fn policy(&self) -> serde_json::Value {
        json!({
            "n": self.spec.n(),
            "full_oracle_max_n": self.full_oracle_max_n,
            "dense_full_limit_n": FULL_MAX_N,
            "full": if self.full_allowed() { "computed" } else { "skipped" },
            "low_energy": if self.low_allowed() { "computed" } else { "skipped" },
        })
    }
}

fn col(name: &str, unit: &str) -> String {
    format!("{name} [{unit}]")
}

fn axis_columns() -> Vec<String> {
    vec![col("t", "1"), col("x", "w")]
}

pub const SPECTRUM_TAGS: [&str; 2] = ["hc_sym", "core"];

/// Lowest `k` levels of `H_C^sym` and `H_core`, plus the bare energies.
pub fn spectrum(run: &Run) -> Result<Vec<Table>> {
    let k = run.config.k.unwrap_or(DEFAULT_K);
    let mut header = axis_columns();
    for tag in SPECTRUM_TAGS {
        header.extend((0..k).map(|i| col(&format!("E{i}_{tag}"), "w")));
    }
    let mut levels = Table::new("spectrum", header);
    let (m_l, m_r) = (run.spec.m_l(), run.spec.m_r());
    let mut header = axis_columns();
    header.extend((0..=m_l).map(|i| col(&format!("e_L{i}"), "w")));
    header.extend((0..=m_r).map(|j| col(&format!("e_R{j}"), "w")));
    let mut bare = Table::new("bare", header);

    for &t in &run.ts {
        let x = run.x(t);
        let hc = eigenvalues(&assemble_hc_sym(&run.spec, x).h_c_sym)?;
        let core = eigenvalues(&build_core(&run.spec, x).h_core)?;
        let mut row: Vec<Cell> = vec![t.into(), x.into()];
        for e in [&hc, &core] {
            row.extend((0..k).map(|i| Cell::Num(e.get(i).copied().unwrap_or(f64::NAN))));
        }
        levels.push(row);

        let mut row: Vec<Cell> = vec![t.into(), x.into()];
        row.extend((0..=m_l).map(|i| bare_energy(Subsystem::L, i, x, &run.spec).into()));
        row.extend((0..=m_r).map(|j| bare_energy(Subsystem::R, j, x, &run.spec).into()));
        bare.push(row);
    }
    levels.extra = json!({ "k": k, "tags": SPECTRUM_TAGS });
    Ok(vec![levels, bare])
}

/// Ground-state weights of `H_C^sym` on the L-inner blocks.
pub fn blockproj(run: &Run) -> Result<Vec<Table>> {
    let m_r = run.spec.m_r();
    let mut header = axis_columns();
    header.extend((0..=m_r).map(|j| col(&format!("weight_HL{j}"), "1")));
    for name in [
        "weight_HR0",
        "weight_empty",
        "weight_L0_exclusive",
        "weight_R0_exclusive",
        "weight_remainder",
    ] {
        header.push(col(name, "1"));
    }
    let mut table = Table::new("blockproj", header);
    for &t in &run.ts {
        let x = run.x(t);
        let block = assemble_hc_sym(&run.spec, x);
        let g = exact_spectrum(&block.h_c_sym, 1)?.ground_state();
        let p = block_projection(g.as_slice(), &block)?;
        let mut row: Vec<Cell> = vec![t.into(), x.into()];
        row.extend(p.outer.iter().map(|&v| Cell::Num(v)));
        for v in [p.h_r0, p.empty, p.l0_exclusive, p.r0_exclusive, p.remainder] {
            row.push(v.into());
        }
        table.push(row);
    }
    Ok(vec![table])
}

pub const GAP_MEMBERS: [&str; 4] = ["core", "hc_sym", "low", "full"];

/// `E1 - E0` of every chain member along the grid, and each located minimum.
pub fn gapscan(run: &Run) -> Result<Vec<Table>> {
    let spec = &run.spec;
    let gap_of = |member: &str, t: f64| -> anticross_core::Result<f64> {
        let x = spec.x_at(t);
        match member {
            "core" => lowest_gap(&build_core(spec, x).h_core),
            "hc_sym" => lowest_gap(&assemble_hc_sym(spec, x).h_c_sym),
            "low" => lowest_gap(&build_low_energy_hamiltonian(spec, x)?.matrix),
            _ => lowest_gap(&build_full_hamiltonian(spec, x)?),
        }
    };
    let enabled = |member: &str| match member {
        "low" => run.low_allowed(),
        "full" => run.full_allowed(),
        _ => true,
    };

    let mut scans = Vec::new();
    for member in GAP_MEMBERS {
        let scan = if enabled(member) {
            Some(
                scan_gap(|t| gap_of(member, t), &run.ts, GOLDEN_REL_TOL)
                    .with_context(|| format!("scanning the {member} gap"))?,
            )
        } else {
            None
        };
        scans.push(scan);
    }

    let mut header = axis_columns();
    header.extend(GAP_MEMBERS.iter().map(|m| col(&format!("gap_{m}"), "w")));
    let mut curves = Table::new("gapscan", header);
    for (i, &t) in run.ts.iter().enumerate() {
        let mut row: Vec<Cell> = vec![t.into(), run.x(t).into()];
        row.extend(
            scans
                .iter()
                .map(|s| Cell::Num(s.as_ref().map_or(f64::NAN, |s| s.curve[i].1))),
        );
        curves.push(row);
    }

    let header = vec![
        "member".to_string(),
        col("t", "1"),
        col("x", "w"),
        col("gap", "w"),
        "degenerate".to_string(),
    ];
    let mut minima = Table::new("gapscan_minima", header);
    for (member, scan) in GAP_MEMBERS.iter().zip(&scans) {
        let row: Vec<Cell> = match scan {
            Some(s) => vec![
                (*member).into(),
                s.t_star.into(),
                spec.x_at(s.t_star).into(),
                s.gap_min.into(),
                s.degenerate.into(),
            ],
            None => vec![
                (*member).into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                "skipped".into(),
            ],
        };
        minima.push(row);
    }
    let estimate = match find_crossing(spec) {
        Ok(cp) => json!({
            "x_c": cp.x_c,
            "t_c": cp.t_c,
            "e0": cp.e0,
            "g0": cp.g0,
            "gamma_l": cp.gamma_l,
            "gamma_r": cp.gamma_r,
            "gap_2x2": 2.0 * cp.e0.abs() * cp.g0,
            "runtime_bound": cp.runtime_bound(),
        }),
        Err(e) => json!({ "unavailable": e.to_string() }),
    };
    let extra = json!({ "policy": run.policy(), "two_level_estimate": estimate });
    curves.extra = extra.clone();
    minima.extra = extra;
    Ok(vec![curves, minima])
}

fn lambda_grid(steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                LAMBDA_MAX
            } else {
                i as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Levels of the quasi-interpolated Hamiltonian followed from λ = 0.
pub fn gevp(run: &Run) -> Result<Vec<Table>> {
    let lambdas = lambda_grid(run.config.lambda_steps.unwrap_or(DEFAULT_LAMBDA_STEPS));
    let d = run.spec.m_l() + run.spec.m_r() + 2;
    let mut header = axis_columns();
    header.push(col("lambda", "1"));
    header.extend((0..d).map(|n| col(&format!("e{n}"), "w")));
    let mut table = Table::new("gevp", header);
    let mut worst_overlap = 1.0f64;
    for &t in &run.ts {
        let x = run.x(t);
        let sys = build_gevp(&run.spec, x)?;
        let paths =
            lambda_path(&sys, &lambdas).with_context(|| format!("λ continuation at x = {x}"))?;
        worst_overlap = worst_overlap.min(paths.min_overlap);
        for (s, &lambda) in lambdas.iter().enumerate() {
            let mut row: Vec<Cell> = vec![t.into(), x.into(), lambda.into()];
            row.extend(paths.paths.iter().map(|p| Cell::Num(p[s])));
            table.push(row);
        }
    }
    table.extra = json!({ "lambdas": lambdas, "min_continuation_overlap": worst_overlap });
    Ok(vec![table])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

struct Suite {
    name: &'static str,
    points: usize,
    residual: f64,
    tolerance: f64,
    status: Status,
}

impl Suite {
    fn max_residual(name: &'static str, values: &[f64], tolerance: f64) -> Self {
        let residual = values.iter().copied().fold(0.0, f64::max);
        let ok = values.iter().all(|v| v.is_finite() && *v <= tolerance);
        Suite {
            name,
            points: values.len(),
            residual,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn skipped(name: &'static str) -> Self {
        Suite {
            name,
            points: 0,
            residual: f64::NAN,
            tolerance: f64::NAN,
            status: Status::Skip,
        }
    }
}

/// At most `n` grid points spread over the run grid, excluding `x = 0`.
fn sample_xs(run: &Run, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = run
        .ts
        .iter()
        .map(|&t| run.x(t))
        .filter(|&x| x > 0.0)
        .collect();
    if xs.len() <= n {
        return xs;
    }
    (0..n).map(|i| xs[i * (xs.len() - 1) / (n - 1)]).collect()
}

fn failures(values: impl Iterator<Item = bool>) -> Vec<f64> {
    values.map(|ok| if ok { 0.0 } else { 1.0 }).collect()
}

/// Every invariant suite at a sample of grid points; the returned flag is
/// true when any suite failed.
pub fn verify(run: &Run) -> Result<(Vec<Table>, bool)> {
    let spec = &run.spec;
    let xs = sample_xs(run, 11);
    let mut suites = Vec::new();

    let mut values = Vec::new();
    let mut vectors = Vec::new();
    for &x in &xs {
        let s = solve_b(spec.w(), x)?;
        let (e, v) = symmetric_eigen(basic_matrix(spec.w(), x).as_matrix())?;
        values.push((e[0] - s.beta0).abs().max((e[1] - s.beta1).abs()));
        let (g, ex) = s.row_vectors();
        vectors.push(
            sign_aligned_distance(&g, &[v[(0, 0)], v[(1, 0)]])
                .max(sign_aligned_distance(&ex, &[v[(0, 1)], v[(1, 1)]])),
        );
    }
    suites.push(Suite::max_residual("two_level_values", &values, 1e-10));
    suites.push(Suite::max_residual("two_level_vectors", &vectors, 1e-8));

    suites.push(if spec.n_c() <= CONJUGATION_MAX_NC {
        let r = xs
            .iter()
            .map(|&x| verify_clique_conjugation(spec.w(), spec.n_c(), x, spec.j_xx()))
            .collect::<anticross_core::Result<Vec<_>>>()?;
        Suite::max_residual("clique_conjugation", &r, 1e-10)
    } else {
        Suite::skipped("clique_conjugation")
    });

    let mut pencil = Vec::new();
    let mut deformation = Vec::new();
    for &x in &xs {
        let sys = build_gevp(spec, x)?;
        let p = solve_gevp(&sys)?;
        let c = eigenvalues(&build_core(spec, x).h_core)?;
        pencil.push(if p.len() == c.len() {
            p.iter()
                .zip(&c)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        });
        let r = deformation_residuals(&sys, 0.5, 50)?;
        deformation.push(r.iter().map(|d| d.corrected.abs()).fold(0.0, f64::max));
    }
    suites.push(Suite::max_residual("pencil_equals_core", &pencil, 1e-9));
    suites.push(Suite::max_residual(
        "deformation_identity",
        &deformation,
        1e-8,
    ));

    let ids: Vec<_> = xs.iter().map(|&x| identity_checks(spec, x)).collect();
    let ratio: Vec<f64> = ids.iter().map(|r| r.ratio_l.max(r.ratio_r)).collect();
    let weighted: Vec<f64> = ids
        .iter()
        .map(|r| r.weighted_sum_l.max(r.weighted_sum_r))
        .collect();
    suites.push(Suite::max_residual("ratio_identity", &ratio, 1e-12));
    suites.push(Suite::max_residual(
        "weighted_sum_identity",
        &weighted,
        1e-9,
    ));

    if spec.crossing_regime() {
        let cp = find_crossing(spec)?;
        suites.push(Suite::max_residual("bare_crossing", &[cp.residual], 1e-10));
        let cert = certificate(spec, 21)?;
        suites.push(Suite::max_residual(
            "two_level_certificate",
            &[cert.worst_relative_error],
            CERTIFICATE_TOL,
        ));
    } else {
        suites.push(Suite::skipped("bare_crossing"));
        suites.push(Suite::skipped("two_level_certificate"));
    }

    let hc_signs = xs
        .iter()
        .map(|&x| {
            let g = exact_spectrum(&assemble_hc_sym(spec, x).h_c_sym, 1)?.ground_state();
            Ok(classify_sign(g.as_slice()).sign == Sign::SameSign)
        })
        .collect::<anticross_core::Result<Vec<_>>>()?;
    suites.push(Suite::max_residual(
        "same_sign_hc_sym",
        &failures(hc_signs.into_iter()),
        0.0,
    ));

    suites.push(if run.full_allowed() {
        let few: Vec<f64> = xs
            .iter()
            .step_by(xs.len().div_ceil(3).max(1))
            .copied()
            .collect();
        let signs = few
            .iter()
            .map(|&x| {
                let g = exact_spectrum(&build_full_hamiltonian(spec, x)?, 1)?.ground_state();
                Ok(classify_sign(g.as_slice()).sign == Sign::SameSign)
            })
            .collect::<anticross_core::Result<Vec<_>>>()?;
        Suite::max_residual("same_sign_full", &failures(signs.into_iter()), 0.0)
    } else {
        Suite::skipped("same_sign_full")
    });

    let header = vec![
        "suite".to_string(),
        "points".to_string(),
        col("max_residual", "w"),
        col("tolerance", "w"),
        "status".to_string(),
    ];
    let mut table = Table::new("verify", header);
    let mut failed = false;
    for s in &suites {
        failed |= s.status == Status::Fail;
        table.push(vec![
            s.name.into(),
            s.points.into(),
            s.residual.into(),
            s.tolerance.into(),
            s.status.label().into(),
        ]);
    }
    table.extra = json!({ "policy": run.policy(), "failed": failed });
    Ok((vec![table], failed))
}

/// Gap scaling over a family that varies `m_l` with `m_r - m_l` fixed.
pub fn scaling(run: &Run) -> Result<Vec<Table>> {
    let base = run.config.instance.clone();
    let offset = base.m_r as isize - base.m_l as isize;
    let sizes = run
        .config
        .family_m_l
        .clone()
        .unwrap_or_else(|| (2..=6).collect());
    let family = sizes
        .iter()
        .map(|&m_l| {
            let mut p = base.clone();
            p.m_l = m_l;
            p.m_r = usize::try_from(m_l as isize + offset).unwrap_or(0);
            build_instance(&p).with_context(|| format!("family member m_l = {m_l}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = scaling_experiment(&family)?;
    let header = vec![
        "m_l".to_string(),
        "m_r".to_string(),
        "size".to_string(),
        col("x_c", "w"),
        col("g0", "1"),
        col("gap_2x2", "w"),
        col("gap_core", "w"),
        col("x_core", "w"),
        col("ln_gap_core", "ln w"),
        col("ln_gap_2x2", "ln w"),
        col("ln_inv_g0_sq", "1"),
        col("log2_inv_g0_sq", "1"),
        "bound_holds".to_string(),
    ];
    let mut table = Table::new("scaling", header);
    for r in &fit.rows {
        table.push(vec![
            r.m_l.into(),
            r.m_r.into(),
            r.size.into(),
            r.x_c.into(),
            r.g0.into(),
            r.gap_2x2.into(),
            r.gap_core.into(),
            r.x_core.into(),
            r.ln_gap_core.into(),
            r.ln_gap_2x2.into(),
            r.ln_inv_g0_sq.into(),
            r.log2_inv_g0_sq.into(),
            r.bound_holds.into(),
        ]);
    }
    table.extra = json!({ "fit": fit.fit, "points_per_scan": SCALING_POINTS, "family_m_l": sizes });
    Ok(vec![table])
}
