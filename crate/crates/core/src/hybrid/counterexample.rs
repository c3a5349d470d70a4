//! A concrete initial state for which the uncorrected generator drives a cell
//! eigenvalue negative.
//!
//! With `H = lambda x sigma1`, the two sigma1 populations are pushed apart in
//! p while their coherence only picks up a phase, so the coherence soon
//! exceeds the geometric mean of the populations.

use serde::Serialize;

use super::evolve::{Evolution, PositivityTrace};
use super::generator::GeneratorKind;
use super::hamiltonian::HybridHamiltonian;
use super::state::{product_state, ClassicalDistribution, HybridState};
use crate::linalg::pauli;
use crate::phase_space::PhaseGrid;
use crate::{Complex64, Result};

/// Couplings tried by [`scan_naive_counterexamples`], in order.
pub const SCAN_LAMBDAS: [f64; 3] = [1.0, 2.0, 5.0];

/// Per-axis variances of the sharp Gaussians tried for each coupling.
pub const SCAN_VARIANCES: [f64; 3] = [0.25, 0.5, 1.0];

/// Eigenvalue a run must reach to count as a violation.
pub const VIOLATION_THRESHOLD: f64 = -1e-3;

/// Spin up along sigma3 times a centred Gaussian, evolved under
/// `lambda x sigma1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NaiveCounterexample {
    pub lambda: f64,
    pub variance: f64,
}

/// The first violator found by the scan on the default grid with
/// `dt = 1e-3`, `t <= 1`.
pub const PINNED_COUNTEREXAMPLE: NaiveCounterexample = NaiveCounterexample { lambda: 1.0, variance: 0.25 };

impl NaiveCounterexample {
    pub fn hamiltonian(&self, grid: PhaseGrid) -> Result<HybridHamiltonian> {
        HybridHamiltonian::zero(grid, 2).with_x_coupling(self.lambda, &pauli::sigma1())
    }

    pub fn initial_state(&self, grid: PhaseGrid) -> Result<HybridState> {
        let rc = ClassicalDistribution::gaussian(grid, 0.0, 0.0, self.variance, self.variance)?;
        let up = pauli::projector(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        product_state(&up, &rc)
    }

    /// Evolve for up to `t_final`, stopping at the first violation.
    pub fn run(&self, grid: PhaseGrid, kind: GeneratorKind, dt: f64, t_final: f64) -> Result<PositivityTrace> {
        let ev = Evolution::new(&self.hamiltonian(grid)?, kind, dt)?;
        let n = (t_final / dt).round() as usize;
        let (_, trace) = ev.run_until(self.initial_state(grid)?, n, |r| r.min_eig < VIOLATION_THRESHOLD)?;
        Ok(trace)
    }
}

/// Try every coupling and variance in order under the uncorrected generator
/// and return the first candidate that violates positivity, with the time of
/// violation.
pub fn scan_naive_counterexamples(grid: PhaseGrid, dt: f64, t_final: f64) -> Result<Option<(NaiveCounterexample, f64)>> {
    for lambda in SCAN_LAMBDAS {
        for variance in SCAN_VARIANCES {
            let cand = NaiveCounterexample { lambda, variance };
            if let Some(t) = cand.run(grid, GeneratorKind::Naive, dt, t_final)?.first_below(VIOLATION_THRESHOLD) {
                return Ok(Some((cand, t)));
            }
        }
    }
    Ok(None)
}
