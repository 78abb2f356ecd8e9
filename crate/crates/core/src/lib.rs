//! Cavity-optomechanical parameters of a levitated dielectric sphere of any
//! size, and the laser-cooling limits they imply.
//!
//! - [`mie`]: Riccati–Bessel functions and Mie coefficients.
//! - [`params`]: setup types, g̃, κ, Γ, cooperativity, small-particle limits.
//! - [`dynamics`]: drift/diffusion matrices, Lyapunov steady state, propagation.
//! - [`cooling`]: closed-form occupations and the detuning optimizer.
//! - [`sweep`], [`validation`]: radius sweeps and the built-in self-checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cooling;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod grid;
pub mod mie;
pub mod params;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Execution;
