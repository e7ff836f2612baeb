//! R-orders given by explicit presentations, full lattices in A-modules,
//! sublattice enumeration and isomorphism classification.

mod catalog;
mod order;
mod spec;

pub use catalog::*;
pub use order::*;
pub use spec::*;

use thiserror::Error;

use crate::exactarith::ArithError;
use crate::finmod::FinError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("invalid order: {0}")]
    InvalidSpec(String),
    #[error("unsupported module: {0}")]
    UnsupportedModule(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("isomorphism undecided: {0}")]
    Undecided(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not an overring: {0}")]
    NotAnOverring(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Fin(#[from] FinError),
}
