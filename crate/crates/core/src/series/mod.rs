//! Exact truncated formal power series over the rationals.
//!
//! Every series carries an explicit truncation order `D`: coefficients of
//! total degree `<= D` are known exactly, everything above is unknown.
//! Binary operations refuse operands of different orders instead of
//! silently truncating to the smaller one.

mod bivariate;
pub mod rational;
mod univariate;

pub use bivariate::{Series2, Var};
pub use rational::Rational;
pub use univariate::{random_admissible, Series1};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("series has zero constant term and is not a unit")]
    ZeroConstantTerm,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroInnerConstant,
    #[error("series has nonzero constant term; compositional inverse needs f(0) = 0")]
    NonzeroConstantTerm,
    #[error("linear coefficient is zero; series has no compositional inverse")]
    ZeroLinearCoefficient,
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn check_orders(left: usize, right: usize) -> Result<(), SeriesError> {
    if left == right {
        Ok(())
    } else {
        Err(SeriesError::TruncationMismatch { left, right })
    }
}
