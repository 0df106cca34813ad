//! Satisfiability of unquantified set constraints built from set difference
//! and singleton formation.
//!
//! A problem `phi & psi` pairs a conjunction `phi` of literals `x = y \ z`,
//! `x != y \ z` with a conjunction `psi` of singleton atoms `x = {y}`. The
//! pipeline is:
//!
//! 1. [`translate`] rewrites `psi` into a flat conjunction over the Boolean
//!    relators (inclusion, disjointness, equality) and companion variables.
//! 2. [`decide`] settles the flat formula with a witness-bounded CNF
//!    encoding and a CDCL solver.
//! 3. [`models`] turns the abstract witness into a flat hereditarily finite
//!    model and lifts it, one singleton atom at a time, to a model of the
//!    original problem.
//!
//! [`hf`] is the hereditarily finite set kernel and [`oracle`] holds the
//! brute-force ground truth used by the tests and by `bstkit check`.

pub mod decide;
pub mod hf;
pub mod models;
pub mod oracle;
pub mod suites;
pub mod syntax;
pub mod translate;

pub use syntax::{Formula, Literal, Problem, Var};
