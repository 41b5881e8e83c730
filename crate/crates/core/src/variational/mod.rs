//! Continuum limits of the LP families: closed-form optimizers, RK4
//! integration of the tight ODEs, the discretization bridge back to finite
//! LPs, and the multiplier-condition check for the secretary problem.

mod discretize;
mod multiplier;
mod ode;
mod profile;
pub mod quadrature;

pub use discretize::{continuum_objective, discretize_profile, discretize_with, Discretization, DISCRETIZATION_GAP_CONSTANT};
pub use multiplier::{
    conforming_grid, multiplier_check, secretary_candidate, MultiplierProfile, MultiplierReport, ACTIVITY_THRESHOLD,
};
pub use ode::{integrate_tight_ode, rk4, OdeRun, TightOde, Trajectory};
pub use profile::{ContinuumProfile, ProfileTag};
