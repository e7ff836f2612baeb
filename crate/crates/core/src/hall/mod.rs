//! Hall numbers of nilpotent representations of the cyclic quiver, their
//! generic versions over Z[T], and the comparison with zeta matrices of
//! tiled orders.

use thiserror::Error;

use crate::orders::OrderError;
use crate::zeta::ZetaError;

pub mod field;
pub mod generic;
pub mod prop51;
pub mod quiver;

pub use field::Gf;
pub use generic::*;
pub use prop51::*;
pub use quiver::*;

#[derive(Debug, Error)]
pub enum HallError {
    #[error("bad field: {0}")]
    BadField(String),
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("interpolation unstable: {0}")]
    InterpolationUnstable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}
