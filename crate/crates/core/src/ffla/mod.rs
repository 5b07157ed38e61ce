//! Exact arithmetic and dense linear algebra over prime fields.

pub mod elim;
pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{FieldCtx, Fp2};
pub use matrix::{FqMatrix, Solve};
pub use subspace::Subspace;
