//! A classical Gaussian carried once around the harmonic oscillator returns
//! to itself.

use std::f64::consts::PI;

use hybridyn::hybrid::{classical_marginal, product_state, ClassicalDistribution, Evolution, GeneratorKind, HybridHamiltonian};
use hybridyn::phase_space::PhaseGrid;
use hybridyn::CMatrix;

fn main() -> hybridyn::Result<()> {
    let grid = PhaseGrid::standard();
    let h = HybridHamiltonian::harmonic(grid, 1);
    let s0 = product_state(&CMatrix::identity(1, 1), &ClassicalDistribution::gaussian(grid, 2.0, -1.0, 0.5, 0.8)?)?;
    let n = 2000;
    let ev = Evolution::new(&h, GeneratorKind::Corrected, 2.0 * PI / n as f64)?;
    let (quarter, _) = ev.run(s0.clone(), n / 4)?;
    let rc = classical_marginal(&quarter);
    let p = (0..grid.n_cells()).map(|c| grid.p(grid.unindex(c).1) * rc.values()[c]).sum::<f64>() / rc.values().iter().sum::<f64>();
    println!("after a quarter period the mean momentum is {p:.5} (expect -2)");
    let (full, trace) = ev.run(quarter, 3 * n / 4)?;
    let l1 = classical_marginal(&full).add_scaled(-1.0, &classical_marginal(&s0))?.l1_norm();
    println!("after one period: L1 {l1:.3e}, max trace drift {:.2e}", trace.max_trace_drift());
    Ok(())
}
