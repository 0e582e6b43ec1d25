//! Error type shared across the crate.
//!
//! Numeric payloads are carried as `f64` regardless of the scalar type the
//! computation ran in, so the error enum stays non-generic and matchable.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building models or running experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("distribution must have at least one entry")]
    EmptyDistribution,

    #[error("entry {index} is {value}, negative beyond tolerance")]
    NegativeEntry { index: usize, value: f64 },

    #[error("total mass {sum} deviates from 1 beyond tolerance")]
    MassNotOne { sum: f64 },

    #[error("{what} is {value}, outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("state space of {states} states exceeds the cap of {cap}")]
    CapacityExceeded { states: u128, cap: u128 },

    #[error("no input distribution reproduces the target: best residual {residual}")]
    InfeasibleTarget { residual: f64 },

    #[error("sampled divergence is infinite at trial {trial}; target support does not cover the induced output")]
    InfiniteDivergence { trial: u64 },

    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("mean divergence at point {index} is not positive; log-linear fit undefined")]
    NonpositiveMean { index: usize },

    #[error("trial count must be positive")]
    ZeroTrials,
}
