use serde::Serialize;

use crate::phase_space::MatrixField;
use crate::hybrid::HybridState;

/// Pointer statistics split at `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Readout {
    pub p_plus: f64,
    pub p_minus: f64,
    /// Conditional mean of `x / g` over `x > 0`.
    pub pointer_mean_plus: f64,
    pub pointer_mean_minus: f64,
    pub offdiag_norm: f64,
    /// `|integral rho_+-(x, p) dx dp|`, the coherence of the quantum marginal.
    pub marginal_coherence: f64,
}

/// `|integral rho_ab dx dp|` summed over `a < b`.
pub fn marginal_coherence(f: &MatrixField) -> f64 {
    let d = f.dim();
    let m = f.integrate();
    (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).map(|(a, b)| m[(a, b)].norm()).sum()
}

/// `sum_{a<b} integral |rho_ab(x, p)| dx dp`.
pub fn offdiag_norm(f: &MatrixField) -> f64 {
    let d = f.dim();
    let mut total = 0.0;
    for blk in f.blocks() {
        for a in 0..d {
            for b in a + 1..d {
                total += blk[a * d + b].norm();
            }
        }
    }
    total * f.grid().cell_area()
}

pub fn readout(state: &HybridState, g: f64) -> Readout {
    let grid = state.grid();
    let rc = state.field().trace_field();
    let a = grid.cell_area();
    let (mut mp, mut mm, mut xp, mut xm) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..grid.n_x {
        let x = grid.x(i);
        let col: f64 = (0..grid.n_p).map(|j| rc.get(i, j)).sum::<f64>() * a;
        if x > 0.0 {
            mp += col;
            xp += col * x / g;
        } else {
            mm += col;
            xm += col * x / g;
        }
    }
    Readout {
        p_plus: mp,
        p_minus: mm,
        pointer_mean_plus: xp / mp,
        pointer_mean_minus: xm / mm,
        offdiag_norm: offdiag_norm(state.field()),
        marginal_coherence: marginal_coherence(state.field()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stern_gerlach::{analytic_propagate, default_grid, initial_state, ClassicalProfile, SgParams, SpinAmplitudes};

    #[test]
    fn balanced_spin_splits_evenly() {
        let grid = default_grid();
        let p = SgParams::new(3.0).unwrap();
        let s = analytic_propagate(SpinAmplitudes::balanced(), &p, &ClassicalProfile::standard(), grid).unwrap();
        let r = readout(&s, p.g);
        assert!((r.p_plus - 0.5).abs() < 1e-6);
        assert!((r.pointer_mean_plus - 1.0).abs() < p.delta());
        assert!((r.pointer_mean_minus + 1.0).abs() < p.delta());
    }

    #[test]
    fn half_plane_leakage_formula() {
        // each branch is a unit Gaussian at +-g; the opposite half-plane
        // catches Phi(-g) of it, so p+ = |c+|^2 + (|c-|^2 - |c+|^2) Phi(-g)
        let grid = default_grid();
        for (w, g) in [(0.7, 3.0), (0.7, 5.0), (0.2, 4.0)] {
            let spin = SpinAmplitudes::with_weight(w, 0.3).unwrap();
            let s = analytic_propagate(spin, &SgParams::new(g).unwrap(), &ClassicalProfile::standard(), grid).unwrap();
            let r = readout(&s, g);
            // same cell centres, one dimension
            let right = |mu: f64| -> f64 {
                (0..grid.n_x)
                    .map(|i| grid.x(i))
                    .filter(|x| *x > 0.0)
                    .map(|x| (-(x - mu).powi(2) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt())
                    .sum::<f64>()
                    * grid.dx()
            };
            let discrete = w * right(g) + (1.0 - w) * right(-g);
            assert!((r.p_plus - discrete).abs() < 1e-12, "w {w} g {g}: {} vs {discrete}", r.p_plus);
            // the continuum value, up to the midpoint error of the half-line cut
            let expect = w + (1.0 - 2.0 * w) * normal_tail(g);
            assert!((r.p_plus - expect).abs() < 1e-5, "w {w} g {g}: {} vs {expect}", r.p_plus);
        }
    }

    #[test]
    fn coherence_suppression_is_half_the_exponent() {
        let grid = default_grid();
        let spin = SpinAmplitudes::with_weight(0.35, -0.8).unwrap();
        let before = offdiag_norm(initial_state(spin, grid).unwrap().field());
        for g in [3.0, 4.0, 5.0] {
            let s = analytic_propagate(spin, &SgParams::new(g).unwrap(), &ClassicalProfile::standard(), grid).unwrap();
            let ratio = offdiag_norm(s.field()) / before;
            let expect = (-g * g / 2.0_f64).exp();
            assert!((ratio - expect).abs() < 1e-10 * expect.max(1e-3), "g {g}: {ratio} vs {expect}");
        }
    }

    #[test]
    fn marginal_coherence_carries_the_full_exponent() {
        // shifting the p contour by i g removes the continuation factor, leaving e^{-g^2}
        let grid = default_grid();
        let spin = SpinAmplitudes::with_weight(0.35, -0.8).unwrap();
        let before = marginal_coherence(initial_state(spin, grid).unwrap().field());
        assert!((before - (0.35f64 * 0.65).sqrt()).abs() < 1e-12);
        for g in [3.0, 4.0, 5.0] {
            let s = analytic_propagate(spin, &SgParams::new(g).unwrap(), &ClassicalProfile::standard(), grid).unwrap();
            let ratio = marginal_coherence(s.field()) / before;
            let expect = (-g * g).exp();
            assert!((ratio - expect).abs() < 1e-12, "g {g}: {ratio} vs {expect}");
        }
    }

    #[test]
    fn phase_of_c_plus_is_invisible() {
        let grid = default_grid();
        let p = SgParams::new(3.0).unwrap();
        let base = SpinAmplitudes::with_weight(0.7, 0.0).unwrap();
        let r0 = readout(&analytic_propagate(base, &p, &ClassicalProfile::standard(), grid).unwrap(), p.g);
        for phase in [0.3, 1.7, -2.9] {
            let rot = SpinAmplitudes::new(base.c_plus * crate::Complex64::from_polar(1.0, phase), base.c_minus).unwrap();
            let r = readout(&analytic_propagate(rot, &p, &ClassicalProfile::standard(), grid).unwrap(), p.g);
            assert!((r.p_plus - r0.p_plus).abs() < 1e-12);
            assert!((r.pointer_mean_plus - r0.pointer_mean_plus).abs() < 1e-12);
            assert!((r.offdiag_norm - r0.offdiag_norm).abs() < 1e-12);
            assert!((r.marginal_coherence - r0.marginal_coherence).abs() < 1e-12);
        }
    }

    /// Upper normal tail by midpoint quadrature on a fine grid.
    fn normal_tail(z: f64) -> f64 {
        let h = 1e-4;
        let n = ((40.0 - z) / h) as usize;
        (0..n)
            .map(|k| {
                let u = z + (k as f64 + 0.5) * h;
                (-u * u / 2.0).exp()
            })
            .sum::<f64>()
            * h
            / (2.0 * std::f64::consts::PI).sqrt()
    }
}
