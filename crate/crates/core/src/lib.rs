//! Hybrid quantum-classical dynamics on a discretized phase space.
//!
//! The crate is organised around five pieces:
//!
//! * [`phase_space`]: uniform phase-space grids, scalar and matrix-valued
//!   fields, finite differences, Poisson brackets, Gaussian coarse-graining.
//! * [`collapse`]: the indirect position measurement through a Gaussian
//!   ancilla and its net effect, the Gaussian hitting process, with Born-rule
//!   sampling.
//! * [`hybrid`]: hybrid states, marginals, conditional states, the bracket
//!   generator and its coarse-grained correction, RK4 stepping, positivity
//!   monitoring and the mean-field flow.
//! * [`stern_gerlach`]: an impulsive spin-pointer coupling solved in closed
//!   form and through a transform-domain numeric path, plus pointer readout.
//! * [`cli`]: flat config files, scenario runners and output artifacts used by
//!   the `hybridyn` binary.
//!
//! Units are dimensionless with hbar = 1 throughout.

pub mod cli;
pub mod collapse;
mod error;
pub mod hybrid;
pub mod linalg;
pub mod phase_space;
pub mod stern_gerlach;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A small dense complex matrix (d x d).
pub type CMatrix = nalgebra::DMatrix<Complex64>;
