use super::hamiltonian::HybridHamiltonian;
use super::state::{HybridState, CONDITIONING_THRESHOLD};
use crate::linalg;
use crate::phase_space::{Axis, DerivativeScheme, ScalarField};
use crate::Result;

/// Classical velocity field driven by conditional expectation values.
/// Cells whose classical mass is below the conditioning threshold carry zero
/// velocity and `defined = false`.
#[derive(Clone, Debug)]
pub struct FlowField {
    pub xdot: ScalarField,
    pub pdot: ScalarField,
    pub defined: Vec<bool>,
}

impl FlowField {
    pub fn n_undefined(&self) -> usize {
        self.defined.iter().filter(|d| !**d).count()
    }
}

/// `xdot = tr(d_p H rho_xp)`, `pdot = -tr(d_x H rho_xp)` with `rho_xp` the
/// conditional state of each cell.
pub fn mean_field_flow(h: &HybridHamiltonian, state: &HybridState) -> Result<FlowField> {
    let prep = h.prepare();
    prep.check(state.field())?;
    let d = state.dim();
    let bl = d * d;
    let grid = *state.grid();
    let rho_c = state.field().trace_field();
    let threshold = CONDITIONING_THRESHOLD * rho_c.max_abs();
    let n = grid.n_cells();
    let (mut xd, mut pd, mut defined) = (vec![0.0; n], vec![0.0; n], vec![false; n]);
    for (c, blk) in state.field().blocks().enumerate() {
        let mass = rho_c.values()[c];
        if mass >= threshold && mass > 0.0 {
            let s = c * bl..(c + 1) * bl;
            xd[c] = linalg::trace_product(&prep.hp[s.clone()], blk, d) / mass;
            pd[c] = -linalg::trace_product(&prep.hx[s], blk, d) / mass;
            defined[c] = true;
        }
    }
    Ok(FlowField {
        xdot: ScalarField::from_values(grid, xd)?,
        pdot: ScalarField::from_values(grid, pd)?,
        defined,
    })
}

/// `-d_x(rho_c xdot) - d_p(rho_c pdot)`: the rate of change of the classical
/// marginal implied by transporting it along the flow.
pub fn continuity_divergence(state: &HybridState, flow: &FlowField) -> Result<ScalarField> {
    let rho_c = state.field().trace_field();
    let jx: Vec<f64> = rho_c.values().iter().zip(flow.xdot.values()).map(|(r, v)| r * v).collect();
    let jp: Vec<f64> = rho_c.values().iter().zip(flow.pdot.values()).map(|(r, v)| r * v).collect();
    let jx = ScalarField::from_values(*rho_c.grid(), jx)?.partial_with(Axis::X, DerivativeScheme::for_states());
    let jp = ScalarField::from_values(*rho_c.grid(), jp)?.partial_with(Axis::P, DerivativeScheme::for_states());
    jx.scaled(-1.0).add_scaled(-1.0, &jp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::{corrected_generator, product_state, ClassicalDistribution};
    use crate::linalg::pauli;
    use crate::phase_space::{coarse_grain, PhaseGrid};
    use crate::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn harmonic_flow_is_rotation() {
        let g = PhaseGrid::standard();
        let h = HybridHamiltonian::harmonic(g, 2);
        let s = product_state(&(pauli::identity() * c(0.5, 0.0)), &ClassicalDistribution::standard(g).unwrap()).unwrap();
        let f = mean_field_flow(&h, &s).unwrap();
        for i in 4..g.n_x - 4 {
            for j in 4..g.n_p - 4 {
                let cell = g.index(i, j);
                if f.defined[cell] {
                    assert!((f.xdot.values()[cell] - g.p(j)).abs() < 1e-10);
                    assert!((f.pdot.values()[cell] + g.x(i)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn spin_dependent_force() {
        let g = PhaseGrid::standard();
        let lam = 0.7;
        let h = HybridHamiltonian::harmonic(g, 2).with_x_coupling(lam, &pauli::sigma3()).unwrap();
        let rc = ClassicalDistribution::standard(g).unwrap();
        let up = product_state(&pauli::projector(c(1.0, 0.0), c(0.0, 0.0)), &rc).unwrap();
        let mixed = product_state(&(pauli::identity() * c(0.5, 0.0)), &rc).unwrap();
        let fu = mean_field_flow(&h, &up).unwrap();
        let fm = mean_field_flow(&h, &mixed).unwrap();
        for (i, j) in [(40, 70), (64, 64), (90, 20)] {
            let cell = g.index(i, j);
            assert!((fu.pdot.values()[cell] - (-g.x(i) - lam)).abs() < 1e-10);
            assert!((fm.pdot.values()[cell] + g.x(i)).abs() < 1e-10);
        }
    }

    #[test]
    fn marginal_follows_flow() {
        let g = PhaseGrid::standard();
        let h = HybridHamiltonian::harmonic(g, 2).with_x_coupling(1.0, &pauli::sigma3()).unwrap();
        let rc = ClassicalDistribution::gaussian(g, 0.5, -0.3, 1.0, 1.0).unwrap();
        let s0 = product_state(&pauli::projector(c(0.6, 0.0), c(0.0, 0.8)), &rc).unwrap();
        let s = HybridState::new(coarse_grain(s0.field()).unwrap()).unwrap();
        let rate = corrected_generator(&h, &s).unwrap().trace_field();
        let div = continuity_divergence(&s, &mean_field_flow(&h, &s).unwrap()).unwrap();
        let l1 = rate.add_scaled(-1.0, &div).unwrap().l1_norm();
        assert!(l1 < 1e-3, "{l1}");
    }
}
