//! Discretized classical phase space.

mod coarse;
pub mod csv;
mod field;
mod grid;
mod stencil;

pub use coarse::{
    admissibility_check, coarse_grain, coarse_grain_scalar, AdmissibilityReport, KERNEL_VARIANCE,
};
pub use field::{poisson_bracket, poisson_bracket_scalar, MatrixField, ScalarField, HERMITIAN_TOL};
pub use grid::{Axis, PhaseGrid, MIN_CELLS};
pub use stencil::{first_derivative_weights, AxisStencil, Closure, DerivativeScheme, DEFAULT_ORDER};

pub(crate) use field::check_grid;
pub(crate) use grid::cell_center;
