use std::io::Write;

use serde::Serialize;

use super::generator::{apply, GeneratorKind};
use super::hamiltonian::{HybridHamiltonian, PreparedHamiltonian};
use super::state::{positivity_report, HybridState};
use crate::phase_space::csv::fmt_f64;
use crate::phase_space::MatrixField;
use crate::{Complex64, Error, Result};

/// Diagnostics recorded after a step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub min_eig: f64,
    /// Total trace before renormalisation.
    pub total_trace: f64,
    pub hermiticity_defect: f64,
}

/// Per-step positivity and conservation record, starting at the initial state.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PositivityTrace {
    pub rows: Vec<TraceRow>,
}

impl PositivityTrace {
    pub fn min_eig(&self) -> f64 {
        self.rows.iter().map(|r| r.min_eig).fold(f64::INFINITY, f64::min)
    }

    /// Largest `|total_trace - 1|` over recorded steps.
    pub fn max_trace_drift(&self) -> f64 {
        self.rows.iter().map(|r| (r.total_trace - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.rows.iter().map(|r| r.hermiticity_defect).fold(0.0, f64::max)
    }

    /// First recorded time with `min_eig < threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<f64> {
        self.rows.iter().find(|r| r.min_eig < threshold).map(|r| r.t)
    }

    /// `t,min_eig,total_trace` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = String::from("t,min_eig,total_trace\n");
        for r in &self.rows {
            buf.push_str(&format!("{},{},{}\n", fmt_f64(r.t), fmt_f64(r.min_eig), fmt_f64(r.total_trace)));
        }
        w.write_all(buf.as_bytes())?;
        Ok(())
    }
}

/// Fixed-step RK4 integrator for one Hamiltonian and generator.
#[derive(Clone, Debug)]
pub struct Evolution {
    prep: PreparedHamiltonian,
    kind: GeneratorKind,
    dt: f64,
}

impl Evolution {
    pub fn new(h: &HybridHamiltonian, kind: GeneratorKind, dt: f64) -> Result<Self> {
        let prep = h.prepare();
        let dt_max = prep.dt_max();
        if !(dt > 0.0 && dt <= dt_max) {
            return Err(Error::StepTooLarge { dt, dt_max });
        }
        Ok(Evolution { prep, kind, dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn prepared(&self) -> &PreparedHamiltonian {
        &self.prep
    }

    fn rhs(&self, rho: &MatrixField) -> Vec<Complex64> {
        apply(&self.prep, rho, self.kind)
    }

    /// One RK4 step followed by trace renormalisation. Returns the total
    /// trace before renormalisation.
    fn advance(&self, rho: &mut MatrixField) -> f64 {
        let dt = self.dt;
        let base = rho.values().to_vec();
        let stage = |k: &[Complex64], s: f64| -> MatrixField {
            let vals = base.iter().zip(k).map(|(r, k)| r + k * s).collect();
            rho.with_values(vals, rho.is_hermitian())
        };
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&stage(&k1, 0.5 * dt));
        let k3 = self.rhs(&stage(&k2, 0.5 * dt));
        let k4 = self.rhs(&stage(&k3, dt));
        let w = dt / 6.0;
        let out = rho.values_mut_keep_flag();
        for (idx, o) in out.iter_mut().enumerate() {
            *o += (k1[idx] + (k2[idx] + k3[idx]) * 2.0 + k4[idx]) * w;
        }
        let tr = rho.total_trace();
        if tr.is_finite() && tr != 0.0 {
            let s = 1.0 / tr;
            for o in rho.values_mut_keep_flag() {
                *o *= s;
            }
        }
        tr
    }

    /// Advance `n_steps` steps, recording diagnostics after each.
    pub fn run(&self, state: HybridState, n_steps: usize) -> Result<(HybridState, PositivityTrace)> {
        self.run_until(state, n_steps, |_| false)
    }

    /// As [`run`](Self::run), stopping early once `stop` returns true for a
    /// freshly recorded row.
    pub fn run_until(
        &self,
        state: HybridState,
        n_steps: usize,
        stop: impl Fn(&TraceRow) -> bool,
    ) -> Result<(HybridState, PositivityTrace)> {
        self.prep.check(state.field())?;
        let mut rho = state.into_field();
        let mut trace = PositivityTrace::default();
        trace.rows.push(TraceRow {
            t: 0.0,
            min_eig: positivity_report(&rho).min_eig,
            total_trace: rho.total_trace(),
            hermiticity_defect: rho.hermiticity_defect(),
        });
        for n in 1..=n_steps {
            let t = n as f64 * self.dt;
            let total_trace = self.advance(&mut rho);
            if !(total_trace.is_finite() && rho.is_finite()) {
                return Err(Error::NonFiniteState { t });
            }
            let hermiticity_defect = rho.hermiticity_defect();
            rho.refresh_hermitian_flag();
            let row = TraceRow { t, min_eig: positivity_report(&rho).min_eig, total_trace, hermiticity_defect };
            trace.rows.push(row);
            if stop(&row) {
                break;
            }
        }
        Ok((HybridState::from_field_unchecked(rho), trace))
    }
}

/// `n_steps` RK4 steps of size `dt` under the chosen generator.
pub fn step(
    state: HybridState,
    h: &HybridHamiltonian,
    dt: f64,
    n_steps: usize,
    kind: GeneratorKind,
) -> Result<(HybridState, PositivityTrace)> {
    Evolution::new(h, kind, dt)?.run(state, n_steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hybrid::{product_state, quantum_marginal, ClassicalDistribution};
    use crate::linalg::pauli;
    use crate::phase_space::PhaseGrid;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let g = PhaseGrid::standard();
        let rc = ClassicalDistribution::gaussian(g, 0.5, 0.0, 0.8, 1.1).unwrap();
        let s = product_state(&pauli::projector(c(0.6, 0.0), c(0.0, 0.8)), &rc).unwrap();
        let (out, trace) = step(s.clone(), &HybridHamiltonian::zero(g, 2), 0.01, 10, GeneratorKind::Corrected).unwrap();
        assert!(out.field().add_scaled(-1.0, s.field()).unwrap().max_abs() < 1e-14);
        assert_eq!(trace.rows.len(), 11);
    }

    #[test]
    fn larmor_precession() {
        let g = PhaseGrid::square(6.0, 48).unwrap();
        let w = 2.0;
        let h = HybridHamiltonian::quantum(pauli::sigma3() * c(0.5 * w, 0.0), g).unwrap();
        let s0 = 0.5_f64.sqrt();
        let s = product_state(&pauli::projector(c(s0, 0.0), c(s0, 0.0)), &ClassicalDistribution::standard(g).unwrap()).unwrap();
        let period = 2.0 * PI / w;
        let n = 400;
        let ev = Evolution::new(&h, GeneratorKind::Corrected, period / n as f64).unwrap();
        let (mid, _) = ev.run(s, n / 4).unwrap();
        // a quarter period: coherence 1/2 rotated by e^{-i w t}
        let q = quantum_marginal(&mid);
        assert!((q[(0, 1)] - c(0.0, -0.5)).norm() < 1e-6, "{}", q[(0, 1)]);
        let (end, _) = ev.run(mid, 3 * n / 4).unwrap();
        let q = quantum_marginal(&end);
        assert!((q[(0, 1)] - c(0.5, 0.0)).norm() < 1e-6);
        assert!((q[(0, 0)] - c(0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn step_bound_is_enforced() {
        let g = PhaseGrid::standard();
        let h = HybridHamiltonian::harmonic(g, 1);
        let dt_max = h.prepare().dt_max();
        assert!(matches!(Evolution::new(&h, GeneratorKind::Naive, 1.01 * dt_max), Err(Error::StepTooLarge { .. })));
        assert!(Evolution::new(&h, GeneratorKind::Naive, dt_max).is_ok());
    }

    #[test]
    fn trace_csv_layout() {
        let t = PositivityTrace {
            rows: vec![TraceRow { t: 0.0, min_eig: -0.5, total_trace: 1.0, hermiticity_defect: 0.0 }],
        };
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next(), Some("t,min_eig,total_trace"));
        assert_eq!(text.lines().count(), 2);
    }
}
