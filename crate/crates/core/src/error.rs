use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the series, parametrization and certification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series is not normalized (need f(0) = 0 and f'(0) = 1)")]
    NotNormalized,

    #[error("truncation order {got} is too small, need at least {needed}")]
    InsufficientOrder { needed: usize, got: usize },

    #[error("argument outside its domain: {0}")]
    Domain(String),

    #[error("no boundary regime applies: tau1 = {tau1}, |tau2| = {tau2_abs}, |tau3| = {tau3_abs}")]
    AmbiguousRegime {
        tau1: f64,
        tau2_abs: f64,
        tau3_abs: f64,
    },

    #[error("pole detected at z = {0}")]
    Pole(Complex64),

    #[error("denominator below 1e-14 at z = {0}")]
    NearZeroDenominator(Complex64),

    #[error("Hankel window needs {needed} terms, sequence has {available}")]
    Range { needed: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
