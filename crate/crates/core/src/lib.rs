//! Geometric control toolkit.
//!
//! Controllability tests for linear and nonlinear systems, numerical Lie
//! bracket calculus, and closed-form or integrated solutions of four classical
//! optimal control problems: the time-optimal double integrator, the Dubins
//! car, Euler elasticae, and the sub-Riemannian problem on the Heisenberg group.

pub mod bangbang;
pub mod catalog;
pub mod cli;
pub mod dubins;
pub mod elastica;
pub mod error;
pub mod heisenberg;
pub mod jet;
pub mod linear_ctrl;
pub mod numeric;
pub mod vf_calculus;

pub use error::{Error, Result};
