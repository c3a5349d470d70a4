use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{HybridHamiltonian, PreparedHamiltonian};
use super::state::HybridState;
use crate::phase_space::{Axis, DerivativeScheme, MatrixField};
use crate::{Complex64, Result};

/// Which equation of motion drives the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    /// Commutator plus the symmetrised Poisson bracket.
    Naive,
    /// Naive plus the two derivative commutators.
    Corrected,
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::Naive => "naive",
            GeneratorKind::Corrected => "corrected",
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(GeneratorKind::Naive),
            "corrected" => Ok(GeneratorKind::Corrected),
            other => Err(format!("unknown generator '{other}', expected naive or corrected")),
        }
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One cell of the generator. Only the upper triangle is computed; the
/// output of a Hermitian generator is Hermitian. With `D` known at compile
/// time the loops unroll.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn cell_rhs<const D: usize>(
    h: &[Complex64],
    hx: &[Complex64],
    hp: &[Complex64],
    r: &[Complex64],
    rx: &[Complex64],
    rp: &[Complex64],
    o: &mut [Complex64],
    corrected: bool,
) {
    let n = D * D;
    let (h, hx, hp, r, rx, rp, o) = (&h[..n], &hx[..n], &hp[..n], &r[..n], &rx[..n], &rp[..n], &mut o[..n]);
    for a in 0..D {
        for b in a..D {
            let mut comm = Complex64::new(0.0, 0.0);
            let mut bracket = Complex64::new(0.0, 0.0);
            let mut corr = Complex64::new(0.0, 0.0);
            for k in 0..D {
                let (ak, kb) = (a * D + k, k * D + b);
                comm += h[ak] * r[kb] - r[ak] * h[kb];
                // {H, rho}_P - {rho, H}_P
                bracket += hx[ak] * rp[kb] + rp[ak] * hx[kb] - hp[ak] * rx[kb] - rx[ak] * hp[kb];
                if corrected {
                    corr += hx[ak] * rx[kb] - rx[ak] * hx[kb] + hp[ak] * rp[kb] - rp[ak] * hp[kb];
                }
            }
            let v = -I * comm + bracket * 0.5 - I * corr * 0.5;
            if a == b {
                o[a * D + a] = Complex64::new(v.re, 0.0);
            } else {
                o[a * D + b] = v;
                o[b * D + a] = v.conj();
            }
        }
    }
}

fn cell_rhs_dyn(
    d: usize,
    blocks: [&[Complex64]; 6],
    o: &mut [Complex64],
    corrected: bool,
) {
    let [h, hx, hp, r, rx, rp] = blocks;
    for a in 0..d {
        for b in a..d {
            let mut comm = Complex64::new(0.0, 0.0);
            let mut bracket = Complex64::new(0.0, 0.0);
            let mut corr = Complex64::new(0.0, 0.0);
            for k in 0..d {
                let (ak, kb) = (a * d + k, k * d + b);
                comm += h[ak] * r[kb] - r[ak] * h[kb];
                bracket += hx[ak] * rp[kb] + rp[ak] * hx[kb] - hp[ak] * rx[kb] - rx[ak] * hp[kb];
                if corrected {
                    corr += hx[ak] * rx[kb] - rx[ak] * hx[kb] + hp[ak] * rp[kb] - rp[ak] * hp[kb];
                }
            }
            let v = -I * comm + bracket * 0.5 - I * corr * 0.5;
            if a == b {
                o[a * d + a] = Complex64::new(v.re, 0.0);
            } else {
                o[a * d + b] = v;
                o[b * d + a] = v.conj();
            }
        }
    }
}

/// `d rho / dt` for raw cell data.
pub(crate) fn apply(prep: &PreparedHamiltonian, rho: &MatrixField, kind: GeneratorKind) -> Vec<Complex64> {
    let d = prep.dim;
    let bl = d * d;
    let corrected = kind == GeneratorKind::Corrected;
    let rx = rho.partial_with(Axis::X, DerivativeScheme::for_states());
    let rp = rho.partial_with(Axis::P, DerivativeScheme::for_states());
    let (r, rx, rp) = (rho.values(), rx.values(), rp.values());
    let mut out = vec![Complex64::new(0.0, 0.0); r.len()];
    out.par_chunks_mut(bl).with_min_len(1024).enumerate().for_each(|(c, o)| {
        let s = c * bl..(c + 1) * bl;
        let blocks = [
            &prep.h[s.clone()],
            &prep.hx[s.clone()],
            &prep.hp[s.clone()],
            &r[s.clone()],
            &rx[s.clone()],
            &rp[s],
        ];
        let [h, hx, hp, r, rx, rp] = blocks;
        match d {
            1 => cell_rhs::<1>(h, hx, hp, r, rx, rp, o, corrected),
            2 => cell_rhs::<2>(h, hx, hp, r, rx, rp, o, corrected),
            3 => cell_rhs::<3>(h, hx, hp, r, rx, rp, o, corrected),
            4 => cell_rhs::<4>(h, hx, hp, r, rx, rp, o, corrected),
            _ => cell_rhs_dyn(d, blocks, o, corrected),
        }
    });
    out
}

fn evaluate(h: &HybridHamiltonian, state: &HybridState, kind: GeneratorKind) -> Result<MatrixField> {
    let prep = h.prepare();
    prep.check(state.field())?;
    let mut out = MatrixField::from_values(*state.grid(), state.dim(), apply(&prep, state.field(), kind))?;
    out.refresh_hermitian_flag();
    Ok(out)
}

/// `-i[H, rho] + {H, rho}_P / 2 - {rho, H}_P / 2`.
pub fn naive_generator(h: &HybridHamiltonian, state: &HybridState) -> Result<MatrixField> {
    evaluate(h, state, GeneratorKind::Naive)
}

/// The naive generator plus `-(i/2)[d_x H, d_x rho] - (i/2)[d_p H, d_p rho]`.
pub fn corrected_generator(h: &HybridHamiltonian, state: &HybridState) -> Result<MatrixField> {
    evaluate(h, state, GeneratorKind::Corrected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::{product_state, ClassicalDistribution};
    use crate::linalg::pauli;
    use crate::phase_space::{PhaseGrid, ScalarField};
    use crate::linalg;
    use crate::CMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn test_state(g: PhaseGrid) -> HybridState {
        let rc = ClassicalDistribution::gaussian(g, 0.4, -0.3, 1.2, 0.9).unwrap();
        let rho = pauli::projector(c(0.8, 0.0), c(0.36, 0.48));
        let s = product_state(&rho, &rc).unwrap();
        // add an (x, p)-dependent coherence so the derivative terms are non-trivial
        let tweak = MatrixField::from_fn(g, 2, |x, p, o| {
            let w = 0.01 * (-(x * x + p * p) / 2.0).exp();
            o[1] = c(w * x, w * p);
            o[2] = o[1].conj();
        });
        HybridState::new(s.field().add_scaled(1.0, &tweak).unwrap()).unwrap()
    }

    #[test]
    fn classical_hamiltonian_gives_liouville_bracket() {
        let g = PhaseGrid::standard();
        let hc = ScalarField::from_fn(g, |x, p| 0.5 * p * p + 0.1 * x.powi(4));
        let h = HybridHamiltonian::classical(hc.clone(), 2);
        let s = test_state(g);
        let gen = naive_generator(&h, &s).unwrap();
        // the state is differentiated with the zero-exterior closure, as in the generator
        let st = DerivativeScheme::for_states();
        let (rx, rp) = (s.field().partial_with(Axis::X, st), s.field().partial_with(Axis::P, st));
        let (hx, hp) = (hc.partial_x(), hc.partial_p());
        let expect = MatrixField::from_values(
            g,
            2,
            (0..rx.values().len())
                .map(|k| rp.values()[k] * hx.values()[k / 4] - rx.values()[k] * hp.values()[k / 4])
                .collect(),
        )
        .unwrap();
        let diff = gen.add_scaled(-1.0, &expect).unwrap().max_abs();
        assert!(diff < 1e-12, "{diff}");
        let corr = corrected_generator(&h, &s).unwrap();
        assert!(corr.add_scaled(-1.0, &gen).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn quantum_hamiltonian_gives_commutator() {
        let g = PhaseGrid::standard();
        let hq = pauli::sigma1() * c(0.7, 0.0) + pauli::sigma3() * c(-0.2, 0.0);
        let h = HybridHamiltonian::quantum(hq.clone(), g).unwrap();
        let s = test_state(g);
        let gen = corrected_generator(&h, &s).unwrap();
        for (i, j) in [(10, 20), (64, 64), (100, 3)] {
            let r = s.field().cell_matrix(i, j);
            let expect = (&hq * &r - &r * &hq) * c(0.0, -1.0);
            assert!((gen.cell_matrix(i, j) - expect).camax() < 1e-15);
        }
    }

    #[test]
    fn stationary_harmonic_state() {
        let g = PhaseGrid::standard();
        let h = HybridHamiltonian::harmonic(g, 2)
            .with_interaction(&MatrixField::constant(g, &CMatrix::zeros(2, 2)))
            .unwrap();
        let hq_h = HybridHamiltonian::new(pauli::sigma3(), h.h_c().clone(), h.h_int().clone()).unwrap();
        let rc = ClassicalDistribution::standard(g).unwrap();
        let rho = CMatrix::from_row_slice(2, 2, &[c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]);
        let s = product_state(&rho, &rc).unwrap();
        for gen in [naive_generator(&hq_h, &s).unwrap(), corrected_generator(&hq_h, &s).unwrap()] {
            let mut worst: f64 = 0.0;
            for i in 8..g.n_x - 8 {
                for j in 8..g.n_p - 8 {
                    worst = worst.max(gen.cell(i, j).iter().map(|v| v.norm()).fold(0.0, f64::max));
                }
            }
            assert!(worst < 1e-8, "{worst}");
        }
    }

    #[test]
    fn linear_coupling_correction_and_invariants() {
        let g = PhaseGrid::standard();
        let lam = 1.3;
        let h = HybridHamiltonian::harmonic(g, 2).with_x_coupling(lam, &pauli::sigma3()).unwrap();
        let s = test_state(g);
        let naive = naive_generator(&h, &s).unwrap();
        let corr = corrected_generator(&h, &s).unwrap();
        // the correction is -(i lambda / 2)[sigma3, d_x rho]
        let rx = s.field().partial_with(Axis::X, DerivativeScheme::for_states());
        let s3 = linalg::from_matrix(&pauli::sigma3());
        let mut expect = vec![c(0.0, 0.0); rx.values().len()];
        for (o, r) in expect.chunks_exact_mut(4).zip(rx.values().chunks_exact(4)) {
            linalg::add_commutator(&s3, r, c(0.0, -0.5 * lam), o, 2);
        }
        let diff = corr.add_scaled(-1.0, &naive).unwrap();
        for (a, b) in diff.values().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-12);
        }
        for gen in [&naive, &corr] {
            assert!(gen.hermiticity_defect() < 1e-12);
            assert!(gen.total_trace().abs() < 1e-10);
        }
    }
}
