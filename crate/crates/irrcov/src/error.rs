//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCap { order: usize, cap: usize },

    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("automorphism order {actual} does not divide the complement order {n}")]
    ActionOrder { actual: u64, n: u64 },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("lattice exceeds {cap} subgroups (found at least {found})")]
    LatticeCap { found: usize, cap: usize },

    #[error("{m} eligible noncyclic subgroups exceed the selection cap {cap}")]
    SelectionCap { m: usize, cap: usize },

    #[error("{count} proper subgroups exceed the brute-force cap {cap}")]
    BruteForceCap { count: usize, cap: usize },

    #[error("selection contains id {0}, which is not an eligible noncyclic subgroup")]
    NotEligible(usize),

    #[error("the given subgroups do not cover the group")]
    NotACover,

    #[error("orders {0} and {1} are not coprime")]
    NotCoprime(usize, usize),

    #[error("group is cyclic; the check requires a noncyclic group")]
    CyclicGroup,

    #[error("beta(G) = {0}, expected exactly 2")]
    BetaNotTwo(u64),

    #[error("{p} does not divide the group order {order}")]
    PrimeDoesNotDivide { p: u64, order: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
