//! The classical marginal moves along the flow built from conditional
//! expectation values.

use hybridyn::hybrid::{
    continuity_divergence, corrected_generator, mean_field_flow, product_state, ClassicalDistribution,
    HybridHamiltonian, HybridState,
};
use hybridyn::linalg::pauli;
use hybridyn::phase_space::{coarse_grain, PhaseGrid};
use hybridyn::Complex64;

fn main() -> hybridyn::Result<()> {
    let grid = PhaseGrid::standard();
    let h = HybridHamiltonian::harmonic(grid, 2).with_x_coupling(1.0, &pauli::sigma3())?;
    let rc = ClassicalDistribution::gaussian(grid, 0.5, -0.3, 1.0, 1.0)?;
    let s0 = product_state(&pauli::projector(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)), &rc)?;
    let s = HybridState::new(coarse_grain(s0.field())?)?;

    let flow = mean_field_flow(&h, &s)?;
    let (i, j) = grid.nearest_cell(0.5, -0.3);
    let cell = grid.index(i, j);
    println!("flow at ({:.3}, {:.3}): xdot {:.5}, pdot {:.5}", grid.x(i), grid.p(j), flow.xdot.values()[cell], flow.pdot.values()[cell]);

    let rate = corrected_generator(&h, &s)?.trace_field();
    let div = continuity_divergence(&s, &flow)?;
    println!("L1 |d_t rho_C - continuity| = {:.3e}", rate.add_scaled(-1.0, &div)?.l1_norm());
    Ok(())
}
