use std::f64::consts::PI;

use rustfft::{Fft, FftPlanner};

use super::{ClassicalProfile, SgParams, SpinAmplitudes, POINTER_HALF_WIDTH};
use crate::hybrid::HybridState;
use crate::phase_space::{MatrixField, PhaseGrid};
use crate::{Complex64, Error, Result};

/// Transform components above this fraction of the largest one carry mass;
/// the multiplier on them must stay below [`MULTIPLIER_LIMIT`].
pub const SPECTRAL_FLOOR: f64 = 1e-12;

/// Components below this fraction are round-off and are dropped.
pub const ROUNDOFF_FLOOR: f64 = 1e-15;

/// Largest admissible transform-domain multiplier on a component with mass.
pub const MULTIPLIER_LIMIT: f64 = 1e12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Spin index of the eigenvalue `alpha = +1, -1`.
const SIGNS: [f64; 2] = [1.0, -1.0];

fn check_room(grid: &PhaseGrid, g: f64) -> Result<()> {
    let (w, r) = (POINTER_HALF_WIDTH, POINTER_HALF_WIDTH + g);
    if !grid.contains_box(-r, r, -w, w) {
        return Err(Error::GridTooNarrow(format!(
            "shifts by {g} need x in [-{r}, {r}] and p in [-{w}, {w}]"
        )));
    }
    Ok(())
}

/// Gaussian density with complex momentum argument.
fn continued_gaussian(profile: &ClassicalProfile, x: f64, p: Complex64) -> Result<Complex64> {
    match profile {
        ClassicalProfile::Gaussian { x0, p0, var_x, var_p } => {
            let norm = 1.0 / (2.0 * PI * (var_x * var_p).sqrt());
            let e = -(x - x0).powi(2) / (2.0 * var_x) - (p - p0).powi(2) / (2.0 * var_p);
            Ok(e.exp() * norm)
        }
        ClassicalProfile::Sampled(_) => Err(Error::UnsupportedClassicalState(
            "closed-form propagation needs a Gaussian pointer; use the numeric path".into(),
        )),
    }
}

/// Closed-form final state. Element `(alpha, beta)` picks up
/// `exp(-(alpha - beta)^2 g^2 / 4 - i (alpha - beta) g p)` and its pointer
/// density is evaluated at `x - (alpha + beta) g / 2`,
/// `p - i (alpha - beta) g / 2`.
pub fn analytic_propagate(
    spin: SpinAmplitudes,
    params: &SgParams,
    profile: &ClassicalProfile,
    grid: PhaseGrid,
) -> Result<HybridState> {
    continued_gaussian(profile, 0.0, ZERO)?;
    check_room(&grid, params.g)?;
    let g = params.g;
    let c = [spin.c_plus, spin.c_minus];
    let f = MatrixField::from_fn(grid, 2, |x, p, out| {
        for a in 0..2 {
            for b in a..2 {
                let s = SIGNS[a] - SIGNS[b];
                let m = 0.5 * (SIGNS[a] + SIGNS[b]);
                let damp = Complex64::new(-s * s * g * g / 4.0, -s * g * p).exp();
                let rho = continued_gaussian(profile, x - m * g, Complex64::new(p, -s * g / 2.0)).unwrap_or(ZERO);
                let v = c[a] * c[b].conj() * damp * rho;
                if a == b {
                    out[3 * a] = Complex64::new(v.re, 0.0);
                } else {
                    out[1] = v;
                    out[2] = v.conj();
                }
            }
        }
    });
    HybridState::new(f)
}

/// The block-diagonal state left after the impulse: each population rides
/// its own copy of the pointer displaced to `x = alpha g`.
pub fn diagonal_final_state(spin: SpinAmplitudes, params: &SgParams, grid: PhaseGrid) -> Result<HybridState> {
    check_room(&grid, params.g)?;
    let profile = ClassicalProfile::standard();
    let g = params.g;
    let (wp, wm) = spin.weights();
    let f = MatrixField::from_fn(grid, 2, |x, p, out| {
        out[0] = Complex64::new(wp * continued_gaussian(&profile, x - g, Complex64::new(p, 0.0)).unwrap().re, 0.0);
        out[3] = Complex64::new(wm * continued_gaussian(&profile, x + g, Complex64::new(p, 0.0)).unwrap().re, 0.0);
    });
    HybridState::new(f)
}

/// Move a column of `n` samples by `shift` cells, zero-filled. Integer
/// shifts are copies; others go through a zero-padded spectral shift.
fn shift_line(line: &[Complex64], shift: f64, fwd: &dyn Fft<f64>, inv: &dyn Fft<f64>) -> Vec<Complex64> {
    let n = line.len();
    let k = shift.round();
    if (shift - k).abs() < 1e-9 {
        let k = k as isize;
        return (0..n as isize)
            .map(|i| {
                let src = i - k;
                if (0..n as isize).contains(&src) { line[src as usize] } else { ZERO }
            })
            .collect();
    }
    let len = fwd.len();
    let mut buf = vec![ZERO; len];
    buf[..n].copy_from_slice(line);
    fwd.process(&mut buf);
    for (m, v) in buf.iter_mut().enumerate() {
        let theta = 2.0 * PI * shift * m as f64 / len as f64;
        *v *= if 2 * m == len {
            Complex64::new(theta.cos(), 0.0)
        } else if 2 * m > len {
            Complex64::from_polar(1.0, 2.0 * PI * shift - theta)
        } else {
            Complex64::from_polar(1.0, -theta)
        };
    }
    inv.process(&mut buf);
    buf.truncate(n);
    buf.iter().map(|v| v / len as f64).collect()
}

/// Apply the impulse generator exactly. Populations are shifted in `x` in
/// `n_substeps` equal pieces. The coherence is shifted by an imaginary
/// amount in `p`, a real multiplier `exp(g k - g^2)` on its `p` transform,
/// followed by the phase `exp(-2 i g p)`. Its substeps compose to exactly
/// this one multiplier, and a round trip through `x, p` between them would
/// feed the transform's truncation floor back into modes the next piece
/// amplifies, so it is applied once.
pub fn numeric_propagate(state: &HybridState, params: &SgParams, n_substeps: usize) -> Result<HybridState> {
    if state.dim() != 2 {
        return Err(Error::DimMismatch { expected: 2, found: state.dim() });
    }
    if n_substeps == 0 {
        return Err(Error::Validation("n_substeps must be at least 1".into()));
    }
    let grid = *state.grid();
    check_room(&grid, params.g)?;
    let (nx, np) = (grid.n_x, grid.n_p);
    let g = params.g;
    let mut planner = FftPlanner::new();

    let xf = planner.plan_fft_forward(2 * nx);
    let xi = planner.plan_fft_inverse(2 * nx);
    let mut pops = [state.field().element(0, 0), state.field().element(1, 1)];
    for (a, pop) in pops.iter_mut().enumerate() {
        let shift = SIGNS[a] * g / (n_substeps as f64 * grid.dx());
        let mut col = vec![ZERO; nx];
        for _ in 0..n_substeps {
            for j in 0..np {
                for i in 0..nx {
                    col[i] = pop[i * np + j];
                }
                for (i, v) in shift_line(&col, shift, &*xf, &*xi).into_iter().enumerate() {
                    pop[i * np + j] = Complex64::new(v.re, 0.0);
                }
            }
        }
    }

    let pf = planner.plan_fft_forward(np);
    let pi = planner.plan_fft_inverse(np);
    let dk = 2.0 * PI / (np as f64 * grid.dp());
    // the Nyquist mode is charged the larger of its two multipliers
    let ks: Vec<f64> = (0..np)
        .map(|m| if 2 * m > np { (m as f64 - np as f64) * dk } else { m as f64 * dk })
        .collect();
    let mut coh = state.field().element(0, 1);
    for row in coh.chunks_exact_mut(np) {
        pf.process(row);
    }
    let top = coh.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for row in coh.chunks_exact_mut(np) {
        for (v, k) in row.iter_mut().zip(&ks) {
            let r = v.norm() / top;
            let mult = (g * k - g * g).exp();
            if !(r >= ROUNDOFF_FLOOR) || (mult > MULTIPLIER_LIMIT && r < SPECTRAL_FLOOR) {
                *v = ZERO;
                continue;
            }
            if mult > MULTIPLIER_LIMIT {
                return Err(Error::OffDiagonalUnstable { multiplier: mult });
            }
            *v *= mult / np as f64;
        }
        pi.process(row);
        for (j, v) in row.iter_mut().enumerate() {
            *v *= Complex64::from_polar(1.0, -2.0 * g * grid.p(j));
        }
    }

    let mut values = vec![ZERO; grid.n_cells() * 4];
    for (c, blk) in values.chunks_exact_mut(4).enumerate() {
        blk[0] = pops[0][c];
        blk[1] = coh[c];
        blk[2] = coh[c].conj();
        blk[3] = pops[1][c];
    }
    let f = MatrixField::from_values(grid, 2, values)?;
    if !f.is_finite() {
        return Err(Error::NonFiniteState { t: 1.0 });
    }
    HybridState::new(f)
}
