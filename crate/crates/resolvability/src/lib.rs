//! Channel resolvability toolkit over finite alphabets.
//!
//! The crate answers one family of questions: how well does the output of a
//! rate-limited random codebook, pushed through a discrete memoryless
//! channel, approximate a target product distribution, measured in
//! unnormalized informational divergence? It provides
//!
//! - probability primitives with validated construction ([`prob`]),
//! - letter typicality tests and exact typical-set masses ([`typicality`]),
//! - codebook sampling, induced output laws, exact ensemble averages, Monte
//!   Carlo estimation, and the typical/atypical split of the classical
//!   divergence bound ([`engine`]),
//! - exponent curves and chord bounds on the expected divergence
//!   ([`gallager`]),
//! - minimal-rate certificates for hitting a target exactly ([`optimizer`]),
//! - a worked perfect-code showcase ([`hamming`]) and CSV/JSON report
//!   assembly ([`report`]).
//!
//! All information quantities are in bits. Everything numeric is generic
//! over the [`Real`] scalar with `f64` as the default; the `*64`/`*32`
//! aliases below pin concrete widths. Randomized routines take explicit
//! seeds and are deterministic given them, including under the internal
//! parallelism of the Monte Carlo driver. Dense sequence spaces are capped
//! at `2^24` states and ensemble enumerations at `10^6` codebooks; requests
//! beyond that return [`Error::CapacityExceeded`].

pub mod engine;
pub mod error;
pub mod gallager;
pub mod hamming;
pub mod optimizer;
pub mod prob;
pub mod report;
pub mod scalar;
pub mod seq;
pub mod typicality;

mod decompose;
mod ensemble;

pub use error::{Error, Result};
pub use scalar::Real;

pub use prob::{ChannelMatrix, JointPmf, Pmf};

/// Double-precision probability mass function.
pub type Pmf64 = prob::Pmf<f64>;
/// Single-precision probability mass function.
pub type Pmf32 = prob::Pmf<f32>;
/// Double-precision channel.
pub type ChannelMatrix64 = prob::ChannelMatrix<f64>;
/// Single-precision channel.
pub type ChannelMatrix32 = prob::ChannelMatrix<f32>;
/// Double-precision joint distribution.
pub type JointPmf64 = prob::JointPmf<f64>;
/// Single-precision joint distribution.
pub type JointPmf32 = prob::JointPmf<f32>;
