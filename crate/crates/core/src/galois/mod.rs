//! Finite-field arithmetic for GF(p^m), q ≤ 256, and dense matrices over it.

mod field;
mod matrix;

pub use field::{prime_power, FieldElement, FieldOp, FieldSpec, MAX_ORDER};
pub use matrix::{CodeMatrix, Rref};
