//! Structured MIS instances: disjoint (`Gdis`) and shared (`Gshare`) graphs,
//! their validated parameter sets and the single-stage annealing schedule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest graph handled by exhaustive independent-set enumeration.
pub const MIS_MAX_VERTICES: usize = 24;

/// How the R vertices attach to the L cliques.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    /// Every L vertex is adjacent to every R vertex.
    Disjoint,
    /// Each R vertex misses one designated vertex per clique.
    Shared,
}

/// Raw, unvalidated parameters; optional fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub structure: Structure,
    pub m_l: usize,
    pub n_c: usize,
    pub m_r: usize,
    #[serde(default)]
    pub w: Option<f64>,
    pub j_zz: f64,
    #[serde(default)]
    pub j_xx: Option<f64>,
    #[serde(default)]
    pub gamma1: Option<f64>,
}

impl InstanceParams {
    pub fn new(structure: Structure, m_l: usize, n_c: usize, m_r: usize, j_zz: f64) -> Self {
        Self {
            structure,
            m_l,
            n_c,
            m_r,
            w: None,
            j_zz,
            j_xx: None,
            gamma1: None,
        }
    }

    pub fn disjoint(m_l: usize, n_c: usize, m_r: usize, j_zz: f64) -> Self {
        Self::new(Structure::Disjoint, m_l, n_c, m_r, j_zz)
    }

    pub fn shared(m_l: usize, n_c: usize, m_r: usize, j_zz: f64) -> Self {
        Self::new(Structure::Shared, m_l, n_c, m_r, j_zz)
    }

    pub fn with_w(mut self, w: f64) -> Self {
        self.w = Some(w);
        self
    }

    pub fn with_j_xx(mut self, j_xx: f64) -> Self {
        self.j_xx = Some(j_xx);
        self
    }

    pub fn with_gamma1(mut self, gamma1: f64) -> Self {
        self.gamma1 = Some(gamma1);
        self
    }
}

/// A validated instance with all Hamiltonian parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSpec {
    structure: Structure,
    m_l: usize,
    n_c: usize,
    m_r: usize,
    w: f64,
    j_zz: f64,
    j_xx: f64,
    gamma1: f64,
    n: usize,
    m_g: usize,
    crossing_regime: bool,
    anti_crossing_condition: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Validates raw parameters and computes the derived regime flags.
pub fn build_instance(p: &InstanceParams) -> Result<InstanceSpec> {
    if p.m_l < 1 {
        return Err(invalid("m_l must be at least 1"));
    }
    if p.n_c < 1 {
        return Err(invalid("n_c must be at least 1"));
    }
    if p.m_r < 1 {
        return Err(invalid("m_r must be at least 1"));
    }
    let w = p.w.unwrap_or(1.0);
    if !(w.is_finite() && w > 0.0) {
        return Err(invalid(format!("w must be positive and finite, got {w}")));
    }
    if !p.j_zz.is_finite() || p.j_zz < w {
        return Err(invalid(format!(
            "j_zz must be at least w = {w}, got {}",
            p.j_zz
        )));
    }
    let j_xx = p.j_xx.unwrap_or(0.0);
    if !j_xx.is_finite() {
        return Err(invalid("j_xx must be finite"));
    }
    let sqrt_nc = (p.n_c as f64).sqrt();
    let gamma1 = p.gamma1.unwrap_or(2.0 * sqrt_nc * p.m_l as f64);
    if !(gamma1.is_finite() && gamma1 > 0.0) {
        return Err(invalid(format!("gamma1 must be positive, got {gamma1}")));
    }
    let n = p
        .m_l
        .checked_mul(p.n_c)
        .and_then(|v| v.checked_add(p.m_r))
        .ok_or_else(|| invalid("vertex count overflows"))?;
    let m_g = match p.structure {
        Structure::Disjoint => p.m_r,
        Structure::Shared => p.m_l + p.m_r,
    };
    let m_l = p.m_l as f64;
    let m_r = p.m_r as f64;
    Ok(InstanceSpec {
        structure: p.structure,
        m_l: p.m_l,
        n_c: p.n_c,
        m_r: p.m_r,
        w,
        j_zz: p.j_zz,
        j_xx,
        gamma1,
        n,
        m_g,
        crossing_regime: m_r > m_l && m_r < m_l * sqrt_nc,
        anti_crossing_condition: m_l * sqrt_nc > m_g as f64,
    })
}

impl InstanceSpec {
    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn m_l(&self) -> usize {
        self.m_l
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn m_r(&self) -> usize {
        self.m_r
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn j_zz(&self) -> f64 {
        self.j_zz
    }

    pub fn j_xx(&self) -> f64 {
        self.j_xx
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    /// Total qubit count `m_l·n_c + m_r`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Size of the global maximum independent set.
    pub fn m_g(&self) -> usize {
        self.m_g
    }

    /// `m_l < m_r < m_l·√n_c`: the bare ground energies cross once.
    pub fn crossing_regime(&self) -> bool {
        self.crossing_regime
    }

    /// `m_l·√n_c > m_g`.
    pub fn anti_crossing_condition(&self) -> bool {
        self.anti_crossing_condition
    }

    /// Clique weight after the XX-driver shift, `w - (n_c - 1)·j_xx/4`.
    pub fn w_eff(&self) -> f64 {
        self.w - (self.n_c as f64 - 1.0) * self.j_xx / 4.0
    }

    /// Coupling factor between the collective L and R occupations.
    pub fn f_c(&self) -> f64 {
        match self.structure {
            Structure::Disjoint => 1.0,
            Structure::Shared => (self.n_c as f64 - 1.0) / self.n_c as f64,
        }
    }

    /// Transverse field on the schedule, `x(t) = (1 - t)·Γ1`.
    pub fn x_at(&self, t: f64) -> f64 {
        (1.0 - t) * self.gamma1
    }

    /// Inverse of [`Self::x_at`].
    pub fn t_at(&self, x: f64) -> f64 {
        1.0 - x / self.gamma1
    }

    pub fn params(&self) -> InstanceParams {
        InstanceParams {
            structure: self.structure,
            m_l: self.m_l,
            n_c: self.n_c,
            m_r: self.m_r,
            w: Some(self.w),
            j_zz: self.j_zz,
            j_xx: Some(self.j_xx),
            gamma1: Some(self.gamma1),
        }
    }

    pub fn with_j_zz(&self, j_zz: f64) -> Result<Self> {
        build_instance(&InstanceParams {
            j_zz,
            ..self.params()
        })
    }

    pub fn with_gamma1(&self, gamma1: f64) -> Result<Self> {
        build_instance(&self.params().with_gamma1(gamma1))
    }
}

/// Vertex partition and edge list of a structured graph.
///
/// Vertices are numbered clique-major (clique 0 first), then R.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphAdjacency {
    pub cliques: Vec<Vec<usize>>,
    pub r: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl GraphAdjacency {
    pub fn n_vertices(&self) -> usize {
        self.cliques.iter().map(Vec::len).sum::<usize>() + self.r.len()
    }

    /// Neighbour bitmask of every vertex.
    pub fn neighbour_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n_vertices()];
        for &(a, b) in &self.edges {
            masks[a] |= 1 << b;
            masks[b] |= 1 << a;
        }
        masks
    }
}

/// Edge list following the structural rules, in deterministic order.
pub fn build_adjacency(spec: &InstanceSpec) -> GraphAdjacency {
    let n_c = spec.n_c;
    let cliques: Vec<Vec<usize>> = (0..spec.m_l)
        .map(|c| (c * n_c..(c + 1) * n_c).collect())
        .collect();
    let r: Vec<usize> = (spec.m_l * n_c..spec.n).collect();
    let mut edges = Vec::new();
    for clique in &cliques {
        for (a, &u) in clique.iter().enumerate() {
            for &v in &clique[a + 1..] {
                edges.push((u, v));
            }
        }
    }
    for clique in &cliques {
        for (pos, &u) in clique.iter().enumerate() {
            if spec.structure == Structure::Shared && pos == 0 {
                continue;
            }
            for &v in &r {
                edges.push((u, v));
            }
        }
    }
    GraphAdjacency { cliques, r, edges }
}

/// Exhaustive independent-set statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MisSummary {
    pub mis_size: usize,
    pub mis_count: u64,
    /// Number of maximal independent sets of each size.
    pub maximal_by_size: BTreeMap<usize, u64>,
}

/// Enumerates every independent set by backtracking.
pub fn mis_bruteforce(adj: &GraphAdjacency) -> Result<MisSummary> {
    let n = adj.n_vertices();
    if n > MIS_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "graph for exhaustive MIS",
            size: n,
            limit: MIS_MAX_VERTICES,
        });
    }
    let masks = adj.neighbour_masks();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut summary = MisSummary {
        mis_size: 0,
        mis_count: 0,
        maximal_by_size: BTreeMap::new(),
    };

    // `set` is independent; `blocked` = set ∪ N(set); candidates > `next`.
    fn visit(masks: &[u64], all: u64, next: usize, set: u64, blocked: u64, out: &mut MisSummary) {
        let size = set.count_ones() as usize;
        if blocked == all {
            *out.maximal_by_size.entry(size).or_insert(0) += 1;
        }
        match size.cmp(&out.mis_size) {
            std::cmp::Ordering::Greater => {
                out.mis_size = size;
                out.mis_count = 1;
            }
            std::cmp::Ordering::Equal => out.mis_count += 1,
            std::cmp::Ordering::Less => {}
        }
        for v in next..masks.len() {
            if blocked & (1 << v) == 0 {
                visit(
                    masks,
                    all,
                    v + 1,
                    set | (1 << v),
                    blocked | (1 << v) | masks[v],
                    out,
                );
            }
        }
    }

    visit(&masks, all, 0, 0, 0, &mut summary);
    Ok(summary)
}

/// Annealing schedule sampled on a grid of `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub gamma1: f64,
    pub grid: Vec<f64>,
}

impl Schedule {
    /// `steps` equally spaced points on `[t_min, t_max]`.
    pub fn uniform(gamma1: f64, t_min: f64, t_max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(invalid("a schedule grid needs at least two points"));
        }
        if !(0.0..=1.0).contains(&t_min) || !(0.0..=1.0).contains(&t_max) || t_min >= t_max {
            return Err(invalid(format!(
                "need 0 <= t_min < t_max <= 1, got [{t_min}, {t_max}]"
            )));
        }
        let h = (t_max - t_min) / (steps - 1) as f64;
        let grid = (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    t_max
                } else {
                    t_min + h * i as f64
                }
            })
            .collect();
        Ok(Self { gamma1, grid })
    }

    pub fn x(&self, t: f64) -> f64 {
        (1.0 - t) * self.gamma1
    }

    pub fn xs(&self) -> Vec<f64> {
        self.grid.iter().map(|&t| self.x(t)).collect()
    }
}
