//! Same-sign block in the symmetric subspace and its core reduction.
//!
//! Collective operators act on the Dicke basis of `m` sites in descending
//! occupation: index `k` holds `m - k` occupied sites, so the empty state is
//! the last index.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::InstanceSpec;
use crate::linalg::{kron, DenseSymMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOps {
    pub m: usize,
    /// `diag(m, m-1, …, 0)`.
    pub csz: DMatrix<f64>,
    /// `½Σσ^x` on the symmetric subspace.
    pub csx: DMatrix<f64>,
}

pub fn collective_ops(m: usize) -> Result<CollectiveOps> {
    if m < 1 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let d = m + 1;
    let csz = DMatrix::from_fn(d, d, |i, j| if i == j { (m - i) as f64 } else { 0.0 });
    let mut csx = DMatrix::zeros(d, d);
    for k in 0..m {
        let v = (((k + 1) * (m - k)) as f64).sqrt() / 2.0;
        csx[(k, k + 1)] = v;
        csx[(k + 1, k)] = v;
    }
    Ok(CollectiveOps { m, csz, csx })
}

/// `-√n_c·x·CS^X(m_l) - w_eff·CS^Z̃(m_l)`.
pub fn h_l_bare(spec: &InstanceSpec, x: f64) -> DMatrix<f64> {
    let ops = collective_ops(spec.m_l()).expect("validated m_l");
    -(spec.n_c() as f64).sqrt() * x * ops.csx - spec.w_eff() * ops.csz
}

/// `-x·CS^X(m_r) - w·CS^Z̃(m_r)`.
pub fn h_r_bare(spec: &InstanceSpec, x: f64) -> DMatrix<f64> {
    let ops = collective_ops(spec.m_r()).expect("validated m_r");
    -x * ops.csx - spec.w() * ops.csz
}

/// Tensor ordering of the `(i_L, i_R)` product basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    /// `i_L` varies fastest: outer blocks are fixed R states.
    LInner,
    /// `i_R` varies fastest.
    RInner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SameSignBlock {
    pub spec: InstanceSpec,
    pub x: f64,
    pub h_l_bare: DMatrix<f64>,
    pub h_r_bare: DMatrix<f64>,
    pub h_c_sym: DenseSymMatrix,
    pub ordering: Ordering,
    pub f_c: f64,
}

impl SameSignBlock {
    pub fn dim(&self) -> usize {
        self.h_c_sym.dim()
    }

    /// Position of `(i_L, i_R)` in the product basis.
    pub fn index(&self, i_l: usize, i_r: usize) -> usize {
        let (d_l, d_r) = (self.spec.m_l() + 1, self.spec.m_r() + 1);
        debug_assert!(i_l < d_l && i_r < d_r);
        match self.ordering {
            Ordering::LInner => i_r * d_l + i_l,
            Ordering::RInner => i_l * d_r + i_r,
        }
    }

    /// Permutation taking this block to `other` ordering:
    /// entry `k` is the index in `self` of state `k` of the other ordering.
    pub fn permutation_to(&self, other: Ordering) -> Vec<usize> {
        let (d_l, d_r) = (self.spec.m_l() + 1, self.spec.m_r() + 1);
        (0..d_l * d_r)
            .map(|k| {
                let (i_l, i_r) = match other {
                    Ordering::LInner => (k % d_l, k / d_l),
                    Ordering::RInner => (k / d_r, k % d_r),
                };
                self.index(i_l, i_r)
            })
            .collect()
    }
}

/// `H_C^sym` in the L-inner layout.
pub fn assemble_hc_sym(spec: &InstanceSpec, x: f64) -> SameSignBlock {
    assemble_hc_sym_with(spec, x, Ordering::LInner)
}

/// `H_L^bare ⊗ I + I ⊗ H_R^bare + J_zz·f_c·CS^Z̃(m_l) ⊗ CS^Z̃(m_r)`.
pub fn assemble_hc_sym_with(spec: &InstanceSpec, x: f64, ordering: Ordering) -> SameSignBlock {
    let hl = h_l_bare(spec, x);
    let hr = h_r_bare(spec, x);
    let zl = collective_ops(spec.m_l()).expect("validated").csz;
    let zr = collective_ops(spec.m_r()).expect("validated").csz;
    let il = DMatrix::identity(hl.nrows(), hl.nrows());
    let ir = DMatrix::identity(hr.nrows(), hr.nrows());
    let f_c = spec.f_c();
    let coupling = spec.j_zz() * f_c;
    let h = match ordering {
        Ordering::LInner => kron(&hr, &il) + kron(&ir, &hl) + coupling * kron(&zr, &zl),
        Ordering::RInner => kron(&hl, &ir) + kron(&il, &hr) + coupling * kron(&zl, &zr),
    };
    SameSignBlock {
        spec: spec.clone(),
        x,
        h_l_bare: hl,
        h_r_bare: hr,
        h_c_sym: DenseSymMatrix::from_symmetric(h),
        ordering,
        f_c,
    }
}

/// `H_L^(0)` and `H_R^(0)` glued at the shared empty state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreBlock {
    /// Basis: L states with R empty (descending L occupation, ending at the
    /// empty state), then R states with L empty (R occupation `1..=m_r`).
    pub h_core: DenseSymMatrix,
    /// Index of the all-empty state, `m_l`.
    pub shared_index: usize,
    /// Leading `(m_l+1)` block.
    pub h_l0: DMatrix<f64>,
    /// Trailing `(m_r+1)` block, ascending R occupation from the empty state.
    pub h_r0: DMatrix<f64>,
    /// Index in the source block of every core basis state.
    pub source_indices: Vec<usize>,
}

pub fn extract_core(block: &SameSignBlock) -> CoreBlock {
    let (m_l, m_r) = (block.spec.m_l(), block.spec.m_r());
    let mut idx: Vec<usize> = (0..=m_l).map(|i_l| block.index(i_l, m_r)).collect();
    idx.extend((1..=m_r).map(|count| block.index(m_l, m_r - count)));
    let h = block.h_c_sym.as_matrix();
    let d = idx.len();
    let core = DMatrix::from_fn(d, d, |i, j| h[(idx[i], idx[j])]);
    CoreBlock {
        h_l0: core.view((0, 0), (m_l + 1, m_l + 1)).into_owned(),
        h_r0: core.view((m_l, m_l), (m_r + 1, m_r + 1)).into_owned(),
        h_core: DenseSymMatrix::from_symmetric(core),
        shared_index: m_l,
        source_indices: idx,
    }
}

/// `H_core` at transverse field `x`.
pub fn build_core(spec: &InstanceSpec, x: f64) -> CoreBlock {
    extract_core(&assemble_hc_sym(spec, x))
}

/// Ground-state weights on the blocks of the L-inner layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockProjection {
    /// Weight on `H_L^(j)`: all states with `j` occupied R sites.
    pub outer: Vec<f64>,
    /// Weight on `H_L^(0)` (R empty), including the all-empty state.
    pub h_l0: f64,
    /// Weight on `H_R^(0)` (L empty), including the all-empty state.
    pub h_r0: f64,
    /// Weight on the all-empty state.
    pub empty: f64,
    /// Disjoint partition: `H_L^(0)` without the empty state.
    pub l0_exclusive: f64,
    /// Disjoint partition: `H_R^(0)` without the empty state.
    pub r0_exclusive: f64,
    /// Disjoint partition: everything outside `H_L^(0) ∪ H_R^(0)`.
    pub remainder: f64,
}

pub fn block_projection(state: &[f64], block: &SameSignBlock) -> Result<BlockProjection> {
    if state.len() != block.dim() {
        return Err(Error::DimensionMismatch {
            expected: block.dim(),
            got: state.len(),
        });
    }
    let norm2: f64 = state.iter().map(|a| a * a).sum();
    if !(norm2 > 0.0 && norm2.is_finite()) {
        return Err(Error::InvalidParameter(
            "state has zero or non-finite norm".into(),
        ));
    }
    let (m_l, m_r) = (block.spec.m_l(), block.spec.m_r());
    let wt = |i_l: usize, i_r: usize| state[block.index(i_l, i_r)].powi(2) / norm2;
    let outer: Vec<f64> = (0..=m_r)
        .map(|j| (0..=m_l).map(|i_l| wt(i_l, m_r - j)).sum())
        .collect();
    let h_l0 = outer[0];
    let h_r0: f64 = (0..=m_r).map(|i_r| wt(m_l, i_r)).sum();
    let empty = wt(m_l, m_r);
    let l0_exclusive = h_l0 - empty;
    let r0_exclusive = h_r0 - empty;
    let remainder = (0..m_l)
        .flat_map(|i_l| (0..m_r).map(move |i_r| (i_l, i_r)))
        .map(|(i_l, i_r)| wt(i_l, i_r))
        .sum();
    Ok(BlockProjection {
        outer,
        h_l0,
        h_r0,
        empty,
        l0_exclusive,
        r0_exclusive,
        remainder,
    })
}
