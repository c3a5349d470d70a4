//! Gaussian coarse-graining over Planck cells.
//!
//! The kernel is the isotropic Gaussian `exp(-(xi^2 + eta^2))`, i.e. per-axis
//! variance 1/2, normalised to unit mass on the grid. Near the edges the kernel
//! is truncated and renormalised per source cell, which keeps the total mass
//! exact.

use rayon::prelude::*;
use serde::Serialize;

use super::field::{MatrixField, ScalarField};
use super::grid::{Axis, PhaseGrid};
use crate::linalg;
use crate::{Complex64, Error, Result};

/// Per-axis variance of the coarse-graining kernel.
pub const KERNEL_VARIANCE: f64 = 0.5;

/// Kernel taps are kept while `exp(-xi^2)` exceeds `exp(-KERNEL_CUTOFF^2)`.
const KERNEL_CUTOFF: f64 = 6.5;

/// Largest spacing for which the kernel counts as resolved.
pub const MAX_SPACING: f64 = 1.0;

fn kernel_taps(h: f64) -> Vec<f64> {
    let radius = (KERNEL_CUTOFF / h).ceil() as isize;
    (-radius..=radius).map(|k| (-(k as f64 * h).powi(2)).exp()).collect()
}

fn check_resolution(grid: &PhaseGrid) -> Result<()> {
    for spacing in [grid.dx(), grid.dp()] {
        if spacing > MAX_SPACING {
            return Err(Error::KernelUnderresolved { spacing });
        }
    }
    Ok(())
}

fn convolve_axis(values: &[Complex64], grid: &PhaseGrid, ncomp: usize, axis: Axis) -> Vec<Complex64> {
    let n = grid.len(axis);
    let taps = kernel_taps(grid.spacing(axis));
    let radius = (taps.len() / 2) as isize;
    // mass each source cell spreads inside the grid
    let norms: Vec<f64> = (0..n as isize)
        .map(|i| {
            let lo = (-radius).max(-i);
            let hi = radius.min(n as isize - 1 - i);
            (lo..=hi).map(|k| taps[(k + radius) as usize]).sum()
        })
        .collect();
    let row_len = grid.n_p * ncomp;
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    match axis {
        Axis::X => {
            out.par_chunks_mut(row_len).enumerate().for_each(|(i, row)| {
                let ii = i as isize;
                let lo = (-radius).max(-ii);
                let hi = radius.min(n as isize - 1 - ii);
                for k in lo..=hi {
                    let s = (ii + k) as usize;
                    let w = taps[(k + radius) as usize] / norms[s];
                    let src = &values[s * row_len..(s + 1) * row_len];
                    for (o, v) in row.iter_mut().zip(src) {
                        *o += v * w;
                    }
                }
            });
        }
        Axis::P => {
            out.par_chunks_mut(row_len).enumerate().for_each(|(i, row)| {
                let src_row = &values[i * row_len..(i + 1) * row_len];
                for j in 0..n {
                    let jj = j as isize;
                    let lo = (-radius).max(-jj);
                    let hi = radius.min(n as isize - 1 - jj);
                    let dst = &mut row[j * ncomp..(j + 1) * ncomp];
                    for k in lo..=hi {
                        let s = (jj + k) as usize;
                        let w = taps[(k + radius) as usize] / norms[s];
                        for (o, v) in dst.iter_mut().zip(&src_row[s * ncomp..(s + 1) * ncomp]) {
                            *o += v * w;
                        }
                    }
                }
            });
        }
    }
    out
}

/// Convolve every matrix entry with the unit-mass Planck-cell Gaussian.
pub fn coarse_grain(f: &MatrixField) -> Result<MatrixField> {
    check_resolution(f.grid())?;
    let ncomp = f.block_len();
    let along_x = convolve_axis(f.values(), f.grid(), ncomp, Axis::X);
    let both = convolve_axis(&along_x, f.grid(), ncomp, Axis::P);
    let mut out = f.with_values(both, false);
    if f.is_hermitian() {
        out.refresh_hermitian_flag();
    }
    Ok(out)
}

/// Scalar version of [`coarse_grain`].
pub fn coarse_grain_scalar(f: &ScalarField) -> Result<ScalarField> {
    let m = f.to_matrix_field(1);
    let out = coarse_grain(&m)?;
    ScalarField::from_values(*f.grid(), out.values().iter().map(|v| v.re).collect())
}

/// Heuristic admissibility of a hybrid state: how much the state still
/// changes under one more coarse-graining.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    /// `max_cell ||f - cg(f)||_1 / max_cell tr f`.
    pub distance: f64,
    pub admissible: bool,
}

pub fn admissibility_check(f: &MatrixField, tol: f64) -> Result<AdmissibilityReport> {
    let smooth = coarse_grain(f)?;
    let d = f.dim();
    let bl = f.block_len();
    let worst_diff = f
        .values()
        .par_chunks_exact(bl)
        .zip(smooth.values().par_chunks_exact(bl))
        .map(|(a, b)| {
            let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            linalg::trace_norm(&diff, d)
        })
        .reduce(|| 0.0, f64::max);
    let max_trace = f.trace_field().max_abs();
    let distance = if max_trace > 0.0 { worst_diff / max_trace } else { 0.0 };
    Ok(AdmissibilityReport { distance, admissible: distance <= tol })
}
