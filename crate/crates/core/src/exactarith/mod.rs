//! Exact arithmetic: truncated chain rings R/pi^m, echelon and Smith forms
//! over them, truncated power series and rational functions in T.

mod matrix;
mod ring;
mod series;

pub use matrix::*;
pub use ring::*;
pub use series::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("bad ring: {0}")]
    BadRing(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("interpolation unstable: {0}")]
    InterpolationUnstable(String),
    #[error("shift needs a non-integral power of p: {0}")]
    ShiftNonIntegral(String),
}
