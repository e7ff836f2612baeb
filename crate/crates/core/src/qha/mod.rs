//! Rejective chains, heredity chains of endomorphism algebras and the
//! bounds on global and representation dimension they give, for finite
//! dimensional algebras and for lattices over orders.

use thiserror::Error;

use crate::finmod::FinError;
use crate::orders::OrderError;
use crate::zeta::ZetaError;

mod algebra;
mod cat;
mod lattice;

pub use algebra::*;
pub use cat::*;
pub use lattice::*;

#[derive(Debug, Error)]
pub enum QhaError {
    #[error("not rejective at {0}")]
    NotRejective(String),
    #[error("heredity certificate failed: {0}")]
    HeredityFailed(String),
    #[error("catalog incomplete: {0}")]
    CatalogIncomplete(String),
    #[error("no stabilization: {0}")]
    NoStabilization(String),
    #[error("isomorphism undecided: {0}")]
    Undecided(String),
    #[error(transparent)]
    Fin(#[from] FinError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}
