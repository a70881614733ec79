//! Exact nonnegative matrix factorization through its equivalence with the
//! intermediate simplex problem: find a simplex `T` with `S ⊂ T ⊂ P` for a
//! point set `S` inside a polyhedron `P`.
//!
//! The crate provides the reductions between the two problems (with
//! transcripts that carry solutions back), a closed-form rank-2 solver, an
//! LP-driven single-vertex local search, and the 3-SAT gadget that makes the
//! problem hard, together with verification oracles for each piece.

pub mod cli;
pub mod error;
pub mod linprog;
pub mod numerics;
pub mod reductions;
pub mod sat;
pub mod search;

pub use error::{Error, Result};
pub use linprog::{Polyhedron, Simplex};
pub use numerics::{Matrix, Tolerance};
