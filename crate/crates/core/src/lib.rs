//! Exact solvers for the asymmetric travelling salesman problem and directed
//! Hamiltonicity on sparse digraphs.
//!
//! The crate bundles a branching solver driven by switching walks, a
//! cycle-cover enumerator, a meet-in-the-middle solver over light paths, an
//! algebraic Hamiltonicity test over GF(2^64), the graph reductions these
//! rely on, seeded instance generators, and a portfolio layer that picks a
//! solver from the average outdegree.

pub mod algebraic;
pub mod branching;
pub mod cycle_cover;
pub mod error;
pub mod generators;
pub mod graph;
pub mod mim;
pub mod oracle;
pub mod portfolio;
pub mod reductions;

pub use error::{Error, Result};
pub use graph::{Arc, WeightedDigraph, Weight};
pub use oracle::TourSolution;
