use std::f64::consts::PI;

use hybridyn::collapse::{
    ancilla_state, entangle, hit, outcome_pdf, project_pointer, HitParams, LineGrid, OutcomeSampler, WaveFunction,
};
use hybridyn::hybrid::{
    corrected_generator, naive_generator, product_state, quantum_marginal, ClassicalDistribution, HybridHamiltonian,
    HybridState,
};
use hybridyn::linalg::pauli;
use hybridyn::phase_space::{
    coarse_grain, poisson_bracket_scalar, Axis, DerivativeScheme, MatrixField, PhaseGrid, ScalarField,
};
use hybridyn::stern_gerlach::{analytic_propagate, default_grid, readout, ClassicalProfile, SgParams, SpinAmplitudes};
use hybridyn::{CMatrix, Complex64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wide enough that the coarse-grained states below vanish to ~1e-12 at the edges.
fn small_grid() -> PhaseGrid {
    PhaseGrid::square(10.0, 48).unwrap()
}

fn bump(x0: f64, p0: f64, w: f64) -> impl Fn(f64, f64) -> f64 + Sync {
    move |x, p| (-((x - x0).powi(2) + (p - p0).powi(2)) / (2.0 * w)).exp()
}

prop_compose! {
    fn spin()(w in 0.0..1.0f64, a in 0.0..2.0 * PI, b in 0.0..2.0 * PI) -> SpinAmplitudes {
        SpinAmplitudes::new(Complex64::from_polar(w.sqrt(), a), Complex64::from_polar((1.0 - w).sqrt(), b)).unwrap()
    }
}

prop_compose! {
    fn hermitian()(v in prop::array::uniform4(-1.0..1.0f64)) -> CMatrix {
        pauli::identity() * c(v[0], 0.0) + pauli::sigma1() * c(v[1], 0.0) + pauli::sigma2() * c(v[2], 0.0)
            + pauli::sigma3() * c(v[3], 0.0)
    }
}

prop_compose! {
    /// A coarse-grained product state with an extra smooth coherence.
    fn hybrid_state()(s in spin(), x0 in -1.0..1.0f64, p0 in -1.0..1.0f64, vx in 0.6..1.0f64, vp in 0.6..1.0f64,
                      eps in 0.0..0.05f64) -> HybridState {
        let g = small_grid();
        let rc = ClassicalDistribution::gaussian(g, x0, p0, vx, vp).unwrap();
        let base = product_state(&s.density_matrix(), &rc).unwrap();
        let f = bump(-x0, p0, 0.8);
        let tweak = MatrixField::from_fn(g, 2, |x, p, o| {
            let w = eps * f(x, p);
            o[1] = c(w * x, w * p);
            o[2] = o[1].conj();
        });
        let field = coarse_grain(&base.field().add_scaled(1.0, &tweak).unwrap()).unwrap();
        HybridState::new(field).unwrap()
    }
}

prop_compose! {
    fn hamiltonian()(hq in hermitian(), mx in hermitian(), mp in hermitian(), lx in -1.0..1.0f64, lp in -1.0..1.0f64,
                     harmonic in any::<bool>()) -> HybridHamiltonian {
        let g = small_grid();
        let base = if harmonic { HybridHamiltonian::harmonic(g, 2) } else { HybridHamiltonian::zero(g, 2) };
        let h = HybridHamiltonian::new(hq, base.h_c().clone(), base.h_int().clone()).unwrap();
        h.with_x_coupling(lx, &mx).unwrap().with_p_coupling(lp, &mp).unwrap()
    }
}

prop_compose! {
    fn packet()(terms in prop::collection::vec((0.2..1.0f64, 0.0..2.0 * PI, -2.5..2.5f64, 0.05..0.5f64), 1..4))
               -> WaveFunction {
        let grid = LineGrid::new(-5.0, 5.0, 401).unwrap();
        let t: Vec<_> = terms.into_iter().map(|(r, ph, mu, v)| (Complex64::from_polar(r, ph), mu, v)).collect();
        WaveFunction::superposition(grid, &t).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scalar_bracket_is_antisymmetric(x0 in -2.0..2.0f64, p0 in -2.0..2.0f64, w in 0.5..2.0f64, k in -1.0..1.0f64) {
        let g = small_grid();
        let a = ScalarField::from_fn(g, bump(x0, p0, w));
        let b = ScalarField::from_fn(g, move |x, p| k * x * p + (0.3 * x).sin() * p * p);
        let ab = poisson_bracket_scalar(&a, &b).unwrap();
        let ba = poisson_bracket_scalar(&b, &a).unwrap();
        prop_assert!(ab.add_scaled(1.0, &ba).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn coarse_graining_is_linear(s in hybrid_state(), t in hybrid_state(), al in -2.0..2.0f64, be in -2.0..2.0f64) {
        let (f, h) = (s.field(), t.field());
        let lhs = coarse_grain(&f.scaled(al).add_scaled(be, h).unwrap()).unwrap();
        let rhs = coarse_grain(f).unwrap().scaled(al).add_scaled(be, &coarse_grain(h).unwrap()).unwrap();
        prop_assert!(lhs.add_scaled(-1.0, &rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn coarse_graining_keeps_trace_and_hermiticity(s in hybrid_state()) {
        let cg = coarse_grain(s.field()).unwrap();
        prop_assert!((cg.total_trace() - s.field().total_trace()).abs() < 1e-10);
        prop_assert!(cg.is_hermitian());
        prop_assert!(cg.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn mixed_partials_commute_on_gaussians(x0 in -1.0..1.0f64, p0 in -1.0..1.0f64, w in 0.8..1.5f64) {
        let g = PhaseGrid::standard();
        let f = ScalarField::from_fn(g, bump(x0, p0, w));
        let xp = f.partial_x().partial_p();
        let px = f.partial_p().partial_x();
        prop_assert!(xp.add_scaled(-1.0, &px).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn outcome_density_is_normalised_and_unbiased(psi in packet(), delta in 0.05..0.5f64) {
        let pdf = outcome_pdf(&psi, delta).unwrap();
        prop_assert!((pdf.integral() - 1.0).abs() < 1e-6);
        prop_assert!((pdf.mean() - psi.mean()).abs() < 1e-6);
    }

    #[test]
    fn hit_matches_ancilla_chain(psi in packet(), delta in 0.1..0.4f64, seed in any::<u64>()) {
        let h = psi.grid().spacing();
        let u = OutcomeSampler::new(&psi, delta).unwrap().draw(&mut ChaCha8Rng::seed_from_u64(seed));
        let anc = ancilla_state(delta, LineGrid::centered_on_zero(12.0 * delta, h).unwrap()).unwrap();
        let (chain, n_chain) = project_pointer(&entangle(&psi, &anc).unwrap(), u).unwrap();
        let (direct, _) = hit(&psi, HitParams::new(delta, u).unwrap()).unwrap();
        prop_assert!(n_chain > 0.0);
        prop_assert!(chain.l2_distance(&direct).unwrap() < 1e-6);
        prop_assert!((direct.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn generators_conserve_trace_and_hermiticity(h in hamiltonian(), s in hybrid_state()) {
        for out in [naive_generator(&h, &s).unwrap(), corrected_generator(&h, &s).unwrap()] {
            prop_assert!(out.total_trace().abs() < 1e-10);
            prop_assert!(out.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn correction_is_the_derivative_commutators(h in hamiltonian(), s in hybrid_state()) {
        let g = *s.grid();
        let diff = corrected_generator(&h, &s).unwrap().add_scaled(-1.0, &naive_generator(&h, &s).unwrap()).unwrap();
        // identity parts of H drop out of the commutators
        let (hx, hp) = (h.h_int().partial_x(), h.h_int().partial_p());
        let st = DerivativeScheme::for_states();
        let (rx, rp) = (s.field().partial_with(Axis::X, st), s.field().partial_with(Axis::P, st));
        let half_i = c(0.0, 0.5);
        let mut worst: f64 = 0.0;
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                let (a, b) = (hx.cell_matrix(i, j), rx.cell_matrix(i, j));
                let (e, f) = (hp.cell_matrix(i, j), rp.cell_matrix(i, j));
                let expect = -((&a * &b - &b * &a) + (&e * &f - &f * &e)) * half_i;
                worst = worst.max((diff.cell_matrix(i, j) - expect).camax());
            }
        }
        prop_assert!(worst < 1e-12, "{}", worst);
    }

    #[test]
    fn stern_gerlach_born_rule_up_to_leakage(s in spin(), g in 3.0..5.0f64) {
        let grid = default_grid();
        let p = SgParams::new(g).unwrap();
        let fin = analytic_propagate(s, &p, &ClassicalProfile::standard(), grid).unwrap();
        let r = readout(&fin, g);
        let (wp, wm) = s.weights();
        let leak = 0.5 * libm_erfc(g / 2f64.sqrt());
        prop_assert!((r.p_plus - (wp + (wm - wp) * leak)).abs() < 1e-5);
        prop_assert!((r.p_plus + r.p_minus - 1.0).abs() < 1e-10);
        let q = quantum_marginal(&fin);
        prop_assert!((q[(0, 0)].re - wp).abs() < 1e-8 && (q[(1, 1)].re - wm).abs() < 1e-8);
        let coh = (s.c_plus * s.c_minus.conj()).norm() * (-g * g).exp();
        prop_assert!((q[(0, 1)].norm() - coh).abs() < 1e-12);
    }

    #[test]
    fn readout_ignores_the_phase_of_c_plus(s in spin(), phase in 0.0..2.0 * PI) {
        let grid = default_grid();
        let p = SgParams::new(3.0).unwrap();
        let r0 = readout(&analytic_propagate(s, &p, &ClassicalProfile::standard(), grid).unwrap(), p.g);
        let rot = SpinAmplitudes::new(s.c_plus * Complex64::from_polar(1.0, phase), s.c_minus).unwrap();
        let r1 = readout(&analytic_propagate(rot, &p, &ClassicalProfile::standard(), grid).unwrap(), p.g);
        prop_assert!((r0.p_plus - r1.p_plus).abs() < 1e-12);
        prop_assert!((r0.offdiag_norm - r1.offdiag_norm).abs() < 1e-12);
        prop_assert!((r0.marginal_coherence - r1.marginal_coherence).abs() < 1e-12);
        if r0.p_plus > 1e-6 {
            prop_assert!((r0.pointer_mean_plus - r1.pointer_mean_plus).abs() < 1e-12);
        }
    }
}

/// Complementary error function by midpoint quadrature of the Gaussian tail.
fn libm_erfc(z: f64) -> f64 {
    let h = 1e-4;
    let n = ((12.0 - z) / h) as usize;
    let s: f64 = (0..n).map(|k| (-(z + (k as f64 + 0.5) * h).powi(2)).exp()).sum();
    2.0 / PI.sqrt() * s * h
}
