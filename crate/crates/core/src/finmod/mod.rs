//! Finite modules over finite-dimensional F_p-algebras: Hom and End spaces,
//! radicals, decomposition, submodule enumeration, homological invariants.

mod algebra;
pub mod fp;
mod homological;
mod module;

pub use algebra::*;
pub use homological::*;
pub use module::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinError {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("decomposition uncertified: {0}")]
    DecompositionUncertified(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("cutoff reached: {0}")]
    CutoffReached(String),
}
