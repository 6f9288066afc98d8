//! Steady state, irreversible entropy production and Gaussian quantum
//! correlations of a linearized optomechanical cavity with an intracavity
//! optical parametric oscillator.
//!
//! The model is a two-mode Gaussian system (cavity `a`, mechanics `b`) whose
//! fluctuations obey `dR/dt = A R + noise`. The pipeline for one parameter
//! point is
//!
//! 1. [`gaussian::build_drift`] and [`gaussian::build_diffusion`],
//! 2. [`lyapunov::is_stable`] and [`lyapunov::solve_steady_covariance`],
//! 3. [`entropy::entropy_production`] and the correlation measures in
//!    [`correlations`].
//!
//! [`point::analyze`] runs all of it at once; [`sweep`] runs it over grids and
//! writes CSV/JSON/SVG. [`langevin`] provides an independent Monte-Carlo
//! estimate of the steady state.

pub mod correlations;
pub mod entropy;
pub mod error;
pub mod gaussian;
pub mod langevin;
pub mod lyapunov;
pub mod meanfield;
pub mod point;
pub mod simplex;
pub mod sweep;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, EffectiveParams, ParamName};
