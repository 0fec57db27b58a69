//! Numerical toolkit for abstract time-fractional Schrödinger equations
//! ∂ₜᵅ(u − u₀) − iAu = f on a diagonalized self-adjoint operator.
//!
//! The crate provides certified Mittag-Leffler evaluation on the imaginary
//! ray, fractional calculus on uniform time grids, the spectral convolution
//! solver, a verification harness for the maximal-regularity inequalities,
//! and Picard solvers for semilinear and quasilinear variants. Every solver
//! path has an independent brute-force counterpart in [`oracle`].
//!
//! See the `examples/` directory for runnable entry points per capability;
//! the `tfschro` binary exposes the same machinery as subcommands.

pub(crate) mod dd;

pub mod accept;
pub mod cli;
pub mod fracalc;
pub mod maxreg;
pub mod mlf;
pub mod solver;
pub mod spectral;
pub mod nonlinear;
pub mod oracle;
pub mod rng;

pub use fracalc::{FracError, TimeGrid, Trajectory};
pub use mlf::{MLParams, MLValue, MlMethod, MlfError};
