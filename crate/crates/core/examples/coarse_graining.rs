//! Smoothing a sharp hybrid state over Planck cells keeps its mass and
//! means and adds one half to each variance.

use hybridyn::hybrid::{positivity_report, product_state, ClassicalDistribution, HybridState};
use hybridyn::linalg::pauli;
use hybridyn::phase_space::{coarse_grain, PhaseGrid};
use hybridyn::Complex64;

fn main() -> hybridyn::Result<()> {
    let grid = PhaseGrid::standard();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rho = pauli::projector(Complex64::new(h, 0.0), Complex64::new(0.0, h));
    let sharp = product_state(&rho, &ClassicalDistribution::gaussian(grid, 0.5, -1.0, 0.25, 0.25)?)?;
    let smooth = HybridState::new(coarse_grain(sharp.field())?)?;

    let trace = |s: &HybridState| ClassicalDistribution::new(s.field().trace_field());
    let (a, b) = (trace(&sharp)?, trace(&smooth)?);
    println!("mass     {:.12} -> {:.12}", sharp.field().total_trace(), smooth.field().total_trace());
    println!("means    {:?} -> {:?}", a.mean(), b.mean());
    println!("variance {:?} -> {:?}", a.variances(), b.variances());
    println!("min eig  {:.3e} -> {:.3e}", positivity_report(sharp.field()).min_eig, positivity_report(smooth.field()).min_eig);
    Ok(())
}
