//! Impulsive spin-pointer coupling: branch weights, pointer means and the
//! surviving coherence, on both propagation paths.

use hybridyn::stern_gerlach::{
    analytic_propagate, default_grid, initial_state, numeric_propagate, readout, ClassicalProfile, SgParams,
    SpinAmplitudes,
};

fn main() -> hybridyn::Result<()> {
    let grid = default_grid();
    let spin = SpinAmplitudes::with_weight(0.7, 0.4)?;
    for g in [3.0, 4.0, 5.0] {
        let p = SgParams::new(g)?;
        let a = readout(&analytic_propagate(spin, &p, &ClassicalProfile::standard(), grid)?, g);
        let n = readout(&numeric_propagate(&initial_state(spin, grid)?, &p, 1)?, g);
        println!(
            "g {g}: p+ {:.8} p- {:.8} means {:+.5} {:+.5} | coherence {:.4e} (e^-g^2 x |c+ c-| = {:.4e}), numeric {:.4e}",
            a.p_plus,
            a.p_minus,
            a.pointer_mean_plus,
            a.pointer_mean_minus,
            a.marginal_coherence,
            (0.21f64).sqrt() * (-g * g).exp(),
            n.marginal_coherence
        );
    }
    Ok(())
}
