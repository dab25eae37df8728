//! Finite-scale net cohomology over causal lattices.
//!
//! Posets and their fundamental groups, nets of finite-dimensional
//! *-algebras, 1-cocycles and their functors, a symbolic locally covariant
//! toy theory, and numerical wave front set estimation.

pub mod algebra;
pub mod bitset;
pub mod cli;
pub mod cocycle;
pub mod covariance;
pub mod fixtures;
pub mod homotopy;
pub mod lattice;
pub mod poset;
pub mod simplicial;
pub mod wavefront;
