//! Counting irredundant subgroup covers of finite groups.
//!
//! A cover of a finite group is a set of proper subgroups whose union is the
//! whole group; it is irredundant when no member can be dropped. This crate
//! computes the number `beta(G)` of irredundant covers, enumerates the covers
//! themselves, checks the structural facts that make the computation fast
//! against independent brute force, and classifies the groups with exactly
//! two irredundant covers.
//!
//! Start with [`group`] to build groups, [`lattice`] for their subgroup
//! lattices, and [`covers::enumerate_covers`] for the counts. The `irrcov`
//! binary exposes the same machinery on the command line.

pub mod arith;
pub mod covers;
pub mod error;
pub mod group;
pub mod lattice;
pub mod mask;
pub mod perm;
pub mod theory;

pub use error::{Error, Result};
