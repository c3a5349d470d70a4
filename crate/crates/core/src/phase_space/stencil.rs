//! Finite-difference first-derivative stencils on a uniform cell-centred axis.

use std::ops::{AddAssign, Mul};

use rayon::prelude::*;

use super::grid::{Axis, PhaseGrid};

/// Default interior accuracy order of the central first-derivative stencil.
pub const DEFAULT_ORDER: usize = 8;

/// How a stencil treats cells next to the grid edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Narrower central stencils towards the edge and a one-sided three-point
    /// stencil in the outermost cell. Exact for quadratics everywhere; used
    /// for Hamiltonians and other fields that do not vanish at the edge.
    OneSided,
    /// The field is taken to vanish outside the grid and the full central
    /// stencil is used everywhere. The discrete operator is skew-symmetric,
    /// which keeps transport of states stable under time stepping.
    ZeroExterior,
}

/// First-derivative scheme: central differences of a given even order in the
/// interior, with a choice of [`Closure`] at the edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivativeScheme {
    order: usize,
    closure: Closure,
}

impl DerivativeScheme {
    pub fn new(order: usize) -> Self {
        Self::with_closure(order, Closure::OneSided)
    }

    pub fn with_closure(order: usize, closure: Closure) -> Self {
        assert!(order >= 2 && order.is_multiple_of(2), "derivative order must be even and >= 2");
        DerivativeScheme { order, closure }
    }

    /// Default order with the zero-exterior closure, for states.
    pub fn for_states() -> Self {
        Self::with_closure(DEFAULT_ORDER, Closure::ZeroExterior)
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Plain second-order central differences.
    pub fn second_order() -> Self {
        Self::new(2)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Stencil for every cell of an axis with `n` cells and spacing `h`.
    pub fn axis_stencil(&self, n: usize, h: f64) -> AxisStencil {
        assert!(n >= 3, "derivative stencils need at least three cells");
        let max_half = self.order / 2;
        let mut taps = Vec::with_capacity(n);
        if self.closure == Closure::ZeroExterior {
            let offsets: Vec<isize> = (-(max_half as isize)..=max_half as isize).collect();
            let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
            let weights = first_derivative_weights(0.0, &nodes);
            for i in 0..n as isize {
                let tap: Vec<(isize, f64)> = offsets
                    .iter()
                    .zip(&weights)
                    .filter(|(o, w)| w.abs() > 1e-12 && (0..n as isize).contains(&(i + **o)))
                    .map(|(&o, w)| (o, w / h))
                    .collect();
                taps.push(tap);
            }
            return AxisStencil { taps };
        }
        for i in 0..n {
            let half = max_half.min(i).min(n - 1 - i);
            let offsets: Vec<isize> = if half == 0 {
                if i == 0 {
                    vec![0, 1, 2]
                } else {
                    vec![-2, -1, 0]
                }
            } else {
                (-(half as isize)..=half as isize).collect()
            };
            let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
            let weights = first_derivative_weights(0.0, &nodes);
            let tap: Vec<(isize, f64)> = offsets
                .iter()
                .zip(weights)
                .filter(|(_, w)| w.abs() > 1e-12)
                .map(|(&o, w)| (o, w / h))
                .collect();
            taps.push(tap);
        }
        AxisStencil { taps }
    }
}

impl Default for DerivativeScheme {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER)
    }
}

/// Precomputed `(offset, weight)` taps for each cell along one axis.
#[derive(Clone, Debug)]
pub struct AxisStencil {
    taps: Vec<Vec<(isize, f64)>>,
}

impl AxisStencil {
    pub fn taps(&self, i: usize) -> &[(isize, f64)] {
        &self.taps[i]
    }
}

/// Fornberg's recursion for finite-difference weights, first derivative only.
///
/// Returns the weights of the derivative at `z` from values at `nodes`.
pub fn first_derivative_weights(z: f64, nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    // c[k][j]: weight of node j for the k-th derivative, k = 0, 1.
    let mut c = vec![[0.0_f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// Apply a derivative along `axis` to cell data with `ncomp` components per
/// cell. Summation order per output cell is fixed, so results do not depend
/// on the thread count.
pub(crate) fn differentiate<T>(
    values: &[T],
    grid: &PhaseGrid,
    ncomp: usize,
    axis: Axis,
    scheme: DerivativeScheme,
) -> Vec<T>
where
    T: Copy + Default + Send + Sync + AddAssign + Mul<f64, Output = T>,
{
    let stencil = scheme.axis_stencil(grid.len(axis), grid.spacing(axis));
    let row_len = grid.n_p * ncomp;
    let mut out = vec![T::default(); values.len()];
    match axis {
        Axis::X => {
            out.par_chunks_mut(row_len).enumerate().for_each(|(i, row)| {
                for &(off, w) in stencil.taps(i) {
                    let src_i = (i as isize + off) as usize;
                    let src = &values[src_i * row_len..(src_i + 1) * row_len];
                    for (o, &s) in row.iter_mut().zip(src) {
                        *o += s * w;
                    }
                }
            });
        }
        Axis::P => {
            out.par_chunks_mut(row_len).enumerate().for_each(|(i, row)| {
                let src_row = &values[i * row_len..(i + 1) * row_len];
                for j in 0..grid.n_p {
                    let dst = &mut row[j * ncomp..(j + 1) * ncomp];
                    for &(off, w) in stencil.taps(j) {
                        let sj = (j as isize + off) as usize;
                        let src = &src_row[sj * ncomp..(sj + 1) * ncomp];
                        for (o, &s) in dst.iter_mut().zip(src) {
                            *o += s * w;
                        }
                    }
                }
            });
        }
    }
    out
}
