//! Fixed instances shared by the benchmarks.

use anticross_core::{build_instance, InstanceParams, InstanceSpec};

/// Disjoint `(2, 4, 3)` at `J_zz = 3`, `n = 11`.
pub fn reference() -> InstanceSpec {
    build_instance(&InstanceParams::disjoint(2, 4, 3, 3.0)).expect("valid reference")
}

/// Disjoint `(1, 5, 2)`, `n = 7`; its bare crossing lies beyond `Γ1`.
pub fn small() -> InstanceSpec {
    build_instance(&InstanceParams::disjoint(1, 5, 2, 3.0)).expect("valid small instance")
}

/// Disjoint `(m, 4, m + 1)` for the scaling family.
pub fn family_member(m_l: usize) -> InstanceSpec {
    build_instance(&InstanceParams::disjoint(m_l, 4, m_l + 1, 3.0)).expect("valid family member")
}

/// A field value close to the reference anti-crossing.
pub const X_NEAR: f64 = 1.3;
