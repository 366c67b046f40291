//! Contextual probability calculus.
//!
//! The crate covers three layers:
//!
//! * [`prob`]: binary distributions, 2×2 transition matrices, the classical
//!   formula of total probability, the coefficient of statistical
//!   incompatibility λ and the interference form of total probability.
//! * [`epr`]: the trigonometric parametrization of transition matrices and the
//!   reconstruction of the EPR-Bohm conditionals `sin²(ξ−η)` / `cos²(ξ−η)`
//!   from maximal interference, with analytic correlators and CHSH.
//! * [`sim`]: a seeded Monte Carlo ensemble in which a contextual selection at
//!   time `t₁` precedes a measurement at `t₂ > t₁`, plus a local
//!   hidden-variable baseline evaluated at a single shared time.
//!
//! The crate is `no_std` and allocation free. Parallel execution, file
//! formats and the command line live in the `ctxprob` companion crate.
#![no_std]
#![warn(missing_docs, rust_2018_idioms, unused_qualifications)]

#[cfg(test)]
extern crate std;

pub mod epr;
mod error;
pub mod prob;
pub mod sim;

pub use error::{Error, Result};
pub use prob::{BinaryDistribution, InterferenceCoefficient, Regime, Sign, TransitionMatrix};
