//! Finite factor-revealing and policy-revealing linear programs, their
//! continuum (variational) limits, and simulators for the online algorithms
//! they analyse.
//!
//! The crate is organised bottom-up:
//!
//! * [`lp`] - dense LP model, bounded-variable tableau simplex, duality
//!   certificates.
//! * [`families`] - the toy, BALANCE, RANKING and secretary LP families and
//!   their tight-recurrence oracles.
//! * [`variational`] - closed-form continuum optimizers, RK4 integration of
//!   the tight ODEs, discretization gaps and the multiplier check.
//! * [`interval`] - the interval-sequence objective for the secretary
//!   continuum problem and its grid search.
//! * [`sim`] - BALANCE, RANKING and secretary simulators plus slab
//!   accounting.
//! * [`studies`] - convergence sweeps and limit extrapolation.

pub mod error;
pub mod families;
pub mod interval;
pub mod lp;
pub mod sim;
pub mod studies;
pub mod variational;

pub mod cli;

pub use error::{Error, Result};

/// 1/e.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

/// 1 - 1/e.
pub const ONE_MINUS_INV_E: f64 = 0.632_120_558_828_557_7;
