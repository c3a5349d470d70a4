//! The explicit ancilla chain: prepare a Gaussian pointer, correlate it with
//! the system by an exact shift, then read the pointer sharply.

use super::wave::{gaussian_amplitude, CompositeWaveFunction, LineGrid, WaveFunction};
use crate::{Complex64, Error, Result};

/// Pointer states with `N^2` below this are treated as impossible outcomes.
pub const ZERO_PROBABILITY: f64 = 1e-300;

/// Gaussian ancilla of precision `delta` centred at 0, sampled on `grid` and
/// renormalised there.
pub fn ancilla_state(delta: f64, grid: LineGrid) -> Result<WaveFunction> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidHitParams(format!("precision must be positive, got {delta}")));
    }
    if grid.min > -6.0 * delta || grid.max < 6.0 * delta {
        return Err(Error::GridTooNarrow(format!(
            "ancilla grid [{}, {}] must reach 6 delta = {} on both sides of 0",
            grid.min,
            grid.max,
            6.0 * delta
        )));
    }
    WaveFunction::from_fn(grid, |x| Complex64::new(gaussian_amplitude(x, delta * delta), 0.0))
}

/// `psi_A(x_A - q) psi(q)` on the product of the system grid and a pointer
/// grid. The pointer grid keeps the system spacing and node alignment and is
/// wide enough to hold the shifted ancilla for every system node.
pub fn entangle(psi: &WaveFunction, ancilla: &WaveFunction) -> Result<CompositeWaveFunction> {
    let system = *psi.grid();
    let h = system.spacing();
    let ag = ancilla.grid();
    let reach = ag.min.abs().max(ag.max.abs());
    let pointer = system.extended((reach / h).ceil() as usize);
    let q = system.points();
    let xa = pointer.points();
    let na = pointer.n;
    let mut amps = vec![Complex64::new(0.0, 0.0); system.n * na];
    for (iq, (row, psi_q)) in amps.chunks_exact_mut(na).zip(psi.amplitudes()).enumerate() {
        for (out, x) in row.iter_mut().zip(&xa) {
            *out = ag.interpolate(ancilla.amplitudes(), x - q[iq]) * psi_q;
        }
    }
    let mut phi = CompositeWaveFunction { system, pointer, amps };
    let n2 = phi.norm_sq();
    if !(n2 > 0.0) {
        return Err(Error::InvalidHitParams("entangled state has zero norm".into()));
    }
    let s = 1.0 / n2.sqrt();
    for a in &mut phi.amps {
        *a *= s;
    }
    Ok(phi)
}

/// Slice the composite state at pointer reading `qbar`. Returns the
/// normalised system state and `N(qbar)`.
pub fn project_pointer(phi: &CompositeWaveFunction, qbar: f64) -> Result<(WaveFunction, f64)> {
    let pg = phi.pointer;
    let na = pg.n;
    let t = pg.fractional_index(qbar);
    let slice: Vec<Complex64> = if t >= 0.0 && t <= (na - 1) as f64 {
        let w = trig_weights(t, na);
        phi.amps
            .chunks_exact(na)
            .map(|row| row.iter().zip(&w).map(|(a, wk)| a * wk).sum())
            .collect()
    } else {
        vec![Complex64::new(0.0, 0.0); phi.system.n]
    };
    let w = WaveFunction::from_amplitudes(phi.system, slice)?;
    let n2 = w.norm_sq();
    if !(n2 >= ZERO_PROBABILITY) {
        return Err(Error::ZeroProbabilityOutcome { qbar, norm_sq: n2 });
    }
    Ok((w.normalized()?, n2.sqrt()))
}

/// Weights of the trigonometric interpolant through `n` equispaced nodes,
/// evaluated at fractional index `t`. Every pointer row is a sampled Gaussian
/// whose spectrum is negligible at the Nyquist frequency, so this reproduces
/// the row between nodes to round-off.
fn trig_weights(t: f64, n: usize) -> Vec<f64> {
    let nearest = t.round();
    if (t - nearest).abs() < 1e-12 {
        let mut w = vec![0.0; n];
        w[nearest as usize] = 1.0;
        return w;
    }
    let nf = n as f64;
    (0..n)
        .map(|m| {
            let u = std::f64::consts::PI * (t - m as f64);
            if n % 2 == 1 {
                u.sin() / (nf * (u / nf).sin())
            } else {
                u.sin() / (nf * (u / nf).tan())
            }
        })
        .collect()
}
