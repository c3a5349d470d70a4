//! The explicit measurement chain (Gaussian ancilla, exact shift, sharp
//! pointer readout) reproduces the direct hit.

use hybridyn::collapse::{ancilla_state, entangle, hit, project_pointer, HitParams, LineGrid, WaveFunction};
use hybridyn::Complex64;

fn main() -> hybridyn::Result<()> {
    let grid = LineGrid::new(-5.0, 5.0, 501)?;
    let psi = WaveFunction::superposition(
        grid,
        &[(Complex64::new(0.6, 0.0), -1.5, 0.2), (Complex64::new(0.0, 0.8), 1.0, 0.1)],
    )?;
    let delta = 0.2;
    let ancilla = ancilla_state(delta, LineGrid::centered_on_zero(12.0 * delta, grid.spacing())?)?;
    let phi = entangle(&psi, &ancilla)?;
    for qbar in [-1.6, -0.3, 0.93] {
        let (chain, n) = project_pointer(&phi, qbar)?;
        let (direct, pdf) = hit(&psi, HitParams::new(delta, qbar)?)?;
        println!("qbar {qbar:>5}: N^2 {:.6e} vs {pdf:.6e}, L2 distance {:.2e}", n * n, chain.l2_distance(&direct)?);
    }
    Ok(())
}
