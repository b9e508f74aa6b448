//! Capacity guards.
//!
//! The engine refuses, rather than attempts, computations whose intermediate
//! objects would outgrow the dense-table representation. All bounds are
//! carried explicitly so a caller (the CLI exposes `--max-order` and
//! `--max-ideals`) can raise or lower them.

/// Size bounds threaded through every constructive operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest ring order that may be materialized as operation tables.
    pub max_order: usize,
    /// Largest number of ideals the lattice search will enumerate.
    pub max_ideals: usize,
    /// Largest enumeration space (product of node orders over the
    /// independent nodes) allowed when computing a projective limit.
    pub max_limit_product: u128,
    /// Largest search space (product of candidate counts) allowed in
    /// homomorphism and factorization searches.
    pub max_search: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 64,
            max_ideals: 4096,
            max_limit_product: 1_000_000,
            max_search: 50_000_000,
        }
    }
}

impl Limits {
    /// Default limits with a different ring-order cap.
    pub fn with_max_order(max_order: usize) -> Self {
        Limits {
            max_order,
            ..Limits::default()
        }
    }
}
