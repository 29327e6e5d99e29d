//! Spectral analysis of tunneling-induced anti-crossings in structured
//! maximum-independent-set annealing Hamiltonians.
//!
//! The crate builds the bipartite clique instances, reduces the transverse
//! field Hamiltonian through the clique and symmetric-subspace bases down to
//! `H_core`, solves the overlapping bare-state pencil, and measures the
//! anti-crossing gap against brute-force diagonalization.
//!
//! ```
//! use anticross_core::{build_instance, find_crossing, InstanceParams};
//!
//! let spec = build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).unwrap();
//! let cp = find_crossing(&spec).unwrap();
//! assert!((cp.x_c - 1.5649215928719031).abs() < 1e-9);
//! ```

pub mod bare;
pub mod clique;
pub mod error;
pub mod gap;
pub mod gevp;
pub mod instance;
pub mod linalg;
pub mod oracle;
pub mod symmetric;
pub mod two_level;

pub use bare::{bare_levels, find_crossing, BareLevel, CrossingPoint, Subsystem};
pub use clique::{build_clique_basis, restricted_operators, CliqueBasis, RestrictedOps};
pub use error::{Error, Result};
pub use gap::{
    certificate, gap_chain, scaling_experiment, schur_effective, ChainOptions, EffectiveTwoLevel,
    GapMinimum, GapReport, ScalingFit, ScalingRow,
};
pub use gevp::{build_gevp, solve_gevp, GevpSystem, Side};
pub use instance::{
    build_adjacency, build_instance, mis_bruteforce, GraphAdjacency, InstanceParams, InstanceSpec,
    MisSummary, Schedule, Structure,
};
pub use linalg::{DenseSymMatrix, SpectrumResult};
pub use oracle::{build_full_hamiltonian, classify_sign, exact_spectrum, GapScan, Sign, SignClass};
pub use symmetric::{assemble_hc_sym, build_core, CoreBlock, Ordering, SameSignBlock};
pub use two_level::{solve_b, TwoLevelSolution};
