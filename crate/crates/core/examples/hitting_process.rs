//! Gaussian hits on a two-peak state: one sampled outcome, then the branch
//! frequencies of a seeded ensemble.

use hybridyn::collapse::{branch_frequencies, sample_ensemble, sample_outcome, LineGrid, WaveFunction};
use hybridyn::Complex64;

fn main() -> hybridyn::Result<()> {
    let grid = LineGrid::new(-5.0, 5.0, 501)?;
    let (w_left, w_right) = (0.3f64, 0.7f64);
    let psi = WaveFunction::superposition(
        grid,
        &[(Complex64::new(w_left.sqrt(), 0.0), -2.0, 0.04), (Complex64::new(w_right.sqrt(), 0.0), 2.0, 0.04)],
    )?;
    let delta = 0.1;

    let one = sample_outcome(&psi, delta, 1)?;
    println!("outcome {:.4}, post-state mean {:.4}, right-peak mass {:.6}", one.qbar, one.post_state.mean(), one.post_state.mass_in(0.0, 5.0));

    let runs = sample_ensemble(&psi, delta, 20_000, 42)?;
    let f = branch_frequencies(&runs, 0.0);
    println!("20000 hits: right {:.4} (|c|^2 = {w_right}), left {:.4}", f.above, f.below);
    Ok(())
}
