//! Exact computation with clones of finite functions.
//!
//! Functions are value tables over `A = {0, .., k-1}`; clones are given by
//! finite generator sets and explored one arity at a time. On top of the
//! closure engine sit the `(Inv_Q, Pol_Q)` connection, decompositions of
//! invariant sets, the Δ-conditions, identification of Boolean conservative
//! Post classes, and the characteristic `χ(F)` of a symmetric conservative
//! clone, plus verifiers that cross-check the decomposition and
//! classification theorems against brute force.

#![allow(clippy::type_complexity)]

pub mod catalog;
pub mod chi;
pub mod clone;
pub mod conditions;
pub mod decomp;
pub mod error;
pub mod func;
pub mod galois;
pub mod io;
pub mod post;
pub mod verify;

pub use clone::{ArityVerdict, Closer, FunctionSet, GeneratorSet, Slice, DEFAULT_CAP};
pub use error::{Error, Result};
pub use func::{FiniteFunction, Permutation, ShapeReport};
pub use galois::QSet;
