//! Multilinear formulas for iterated 2×2 matrix multiplication: polynomial
//! arithmetic, a formula IR, divide-and-conquer constructions, the product
//! decomposition, random restrictions, partial derivative matrix rank, and
//! a reproducible experiment harness.

pub mod error;
pub mod experiments;
pub mod cli;
pub mod decomp;
pub mod field;
pub mod formula;
pub mod generators;
pub mod imm;
pub mod poly;
pub mod rank;
pub mod restriction;
mod text;
pub mod var;

pub use error::{Error, Result};
pub use field::{Fe, PrimeField};
pub use formula::{Builder, Circuit, Formula, GateId, GateKind};
pub use poly::{Monomial, MulMode, Polynomial, VarId, VarSet};
