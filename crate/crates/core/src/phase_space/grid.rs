use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest admissible cell count along either axis.
pub const MIN_CELLS: usize = 8;

/// The two canonical directions of phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    P,
}

/// Uniform cell-centred grid over a rectangle of classical phase space.
///
/// Cell `(i, j)` is centred at `x_min + (i + 1/2) dx`, `p_min + (j + 1/2) dp`.
/// Cells are stored row-major with `x` as the slow index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_x: usize,
    pub n_p: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, n_x: usize, p_min: f64, p_max: f64, n_p: usize) -> Result<Self> {
        if n_x < MIN_CELLS || n_p < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells per axis, got {n_x} x {n_p}"
            )));
        }
        let finite = [x_min, x_max, p_min, p_max].iter().all(|v| v.is_finite());
        if !finite || x_max <= x_min || p_max <= p_min {
            return Err(Error::InvalidGrid(format!(
                "bad extent x [{x_min}, {x_max}], p [{p_min}, {p_max}]"
            )));
        }
        Ok(PhaseGrid { x_min, x_max, p_min, p_max, n_x, n_p })
    }

    /// `[-8, 8]^2` with 128 x 128 cells.
    pub fn standard() -> Self {
        PhaseGrid { x_min: -8.0, x_max: 8.0, p_min: -8.0, p_max: 8.0, n_x: 128, n_p: 128 }
    }

    /// Symmetric square grid `[-half_width, half_width]^2`.
    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n, -half_width, half_width, n)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_x as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.n_p as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn n_cells(&self) -> usize {
        self.n_x * self.n_p
    }

    pub fn len(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.n_x,
            Axis::P => self.n_p,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx(),
            Axis::P => self.dp(),
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_p + j
    }

    #[inline]
    pub fn unindex(&self, cell: usize) -> (usize, usize) {
        (cell / self.n_p, cell % self.n_p)
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        cell_center(self.x_min, self.x_max, self.n_x, i)
    }

    #[inline]
    pub fn p(&self, j: usize) -> f64 {
        cell_center(self.p_min, self.p_max, self.n_p, j)
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.x(i)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.n_p).map(|j| self.p(j)).collect()
    }

    /// Cell whose centre is closest to `(x, p)`, clamped to the grid.
    pub fn nearest_cell(&self, x: f64, p: f64) -> (usize, usize) {
        let clamp = |v: f64, n: usize| (v.round().max(0.0) as usize).min(n - 1);
        let i = clamp((x - self.x_min) / self.dx() - 0.5, self.n_x);
        let j = clamp((p - self.p_min) / self.dp() - 0.5, self.n_p);
        (i, j)
    }

    /// True if the rectangle `[x0, x1] x [p0, p1]` lies inside the grid.
    pub fn contains_box(&self, x0: f64, x1: f64, p0: f64, p1: f64) -> bool {
        self.x_min <= x0 && self.x_max >= x1 && self.p_min <= p0 && self.p_max >= p1
    }
}

/// Centre of cell `i` of `n` on `[lo, hi]`.
///
/// Written as a weighted mean of the end points so that a symmetric interval
/// yields centres that are exact negatives of each other.
#[inline]
pub(crate) fn cell_center(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    let twice_n = 2.0 * n as f64;
    let right = (2 * i + 1) as f64;
    let left = twice_n - right;
    (lo * left + hi * right) / twice_n
}
