use rayon::prelude::*;

use super::grid::{Axis, PhaseGrid};
use super::stencil::{differentiate, DerivativeScheme};
use crate::linalg;
use crate::{CMatrix, Complex64, Error, Result};

/// Entrywise tolerance for the Hermitian flag.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Real scalar field over a phase-space grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: PhaseGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: PhaseGrid) -> Self {
        ScalarField { values: vec![0.0; grid.n_cells()], grid }
    }

    pub fn from_values(grid: PhaseGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} cells",
                values.len(),
                grid.n_cells()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite field value".into()));
        }
        Ok(ScalarField { grid, values })
    }

    /// Sample `f(x, p)` at every cell centre.
    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let values = (0..grid.n_cells())
            .into_par_iter()
            .with_min_len(1024)
            .map(|c| {
                let (i, j) = grid.unindex(c);
                f(grid.x(i), grid.p(j))
            })
            .collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn partial(&self, axis: Axis) -> ScalarField {
        self.partial_with(axis, DerivativeScheme::default())
    }

    pub fn partial_with(&self, axis: Axis, scheme: DerivativeScheme) -> ScalarField {
        let values = differentiate(&self.values, &self.grid, 1, axis, scheme);
        ScalarField { grid: self.grid, values }
    }

    pub fn partial_x(&self) -> ScalarField {
        self.partial(Axis::X)
    }

    pub fn partial_p(&self) -> ScalarField {
        self.partial(Axis::P)
    }

    /// Riemann sum times the cell area.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn scaled(&self, s: f64) -> ScalarField {
        ScalarField { grid: self.grid, values: self.values.iter().map(|v| v * s).collect() }
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &ScalarField) -> Result<ScalarField> {
        check_grid(&self.grid, &other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + alpha * b).collect();
        Ok(ScalarField { grid: self.grid, values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sum of absolute values times the cell area.
    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Promote to `value * identity` with block size `dim`.
    pub fn to_matrix_field(&self, dim: usize) -> MatrixField {
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len() * dim * dim];
        for (cell, v) in self.values.iter().enumerate() {
            for k in 0..dim {
                values[cell * dim * dim + k * dim + k] = Complex64::new(*v, 0.0);
            }
        }
        MatrixField { grid: self.grid, dim, values, hermitian: true }
    }
}

/// Field of d x d complex matrices over a phase-space grid.
///
/// `hermitian` records that every cell block is Hermitian within
/// [`HERMITIAN_TOL`]. Operations that keep Hermiticity keep the flag.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixField {
    grid: PhaseGrid,
    dim: usize,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl MatrixField {
    pub fn zeros(grid: PhaseGrid, dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        MatrixField {
            grid,
            dim,
            values: vec![Complex64::new(0.0, 0.0); grid.n_cells() * dim * dim],
            hermitian: true,
        }
    }

    /// Build from raw row-major cell blocks. The Hermitian flag is set if the
    /// data satisfies it.
    pub fn from_values(grid: PhaseGrid, dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_cells() * dim * dim {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} cells of {dim}x{dim} blocks",
                values.len(),
                grid.n_cells()
            )));
        }
        let mut f = MatrixField { grid, dim, values, hermitian: false };
        f.hermitian = f.hermiticity_defect() <= HERMITIAN_TOL;
        Ok(f)
    }

    /// Fill every cell block with `f(x, p, block)`.
    pub fn from_fn(
        grid: PhaseGrid,
        dim: usize,
        f: impl Fn(f64, f64, &mut [Complex64]) + Sync,
    ) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); grid.n_cells() * dim * dim];
        values.par_chunks_mut(dim * dim).with_min_len(1024).enumerate().for_each(|(c, block)| {
            let (i, j) = grid.unindex(c);
            f(grid.x(i), grid.p(j), block);
        });
        let mut out = MatrixField { grid, dim, values, hermitian: false };
        out.hermitian = out.hermiticity_defect() <= HERMITIAN_TOL;
        out
    }

    /// The same matrix in every cell.
    pub fn constant(grid: PhaseGrid, m: &CMatrix) -> Self {
        let block = linalg::from_matrix(m);
        let dim = m.nrows();
        Self::from_fn(grid, dim, |_, _, out| out.copy_from_slice(&block))
    }

    /// `m * s(x, p)` cell by cell.
    pub fn outer(m: &CMatrix, s: &ScalarField) -> Self {
        let block = linalg::from_matrix(m);
        let dim = m.nrows();
        let grid = *s.grid();
        let mut values = Vec::with_capacity(grid.n_cells() * dim * dim);
        for v in s.values() {
            values.extend(block.iter().map(|b| b * *v));
        }
        let mut out = MatrixField { grid, dim, values, hermitian: false };
        out.hermitian = out.hermiticity_defect() <= HERMITIAN_TOL;
        out
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn block_len(&self) -> usize {
        self.dim * self.dim
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Mutable access to the raw data. Clears the Hermitian flag; call
    /// [`MatrixField::refresh_hermitian_flag`] afterwards to re-establish it.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        self.hermitian = false;
        &mut self.values
    }

    pub(crate) fn values_mut_keep_flag(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>, hermitian: bool) -> MatrixField {
        debug_assert_eq!(values.len(), self.values.len());
        MatrixField { grid: self.grid, dim: self.dim, values, hermitian }
    }

    pub fn refresh_hermitian_flag(&mut self) -> bool {
        self.hermitian = self.hermiticity_defect() <= HERMITIAN_TOL;
        self.hermitian
    }

    pub fn cell(&self, i: usize, j: usize) -> &[Complex64] {
        let b = self.block_len();
        let c = self.grid.index(i, j);
        &self.values[c * b..(c + 1) * b]
    }

    pub fn cell_matrix(&self, i: usize, j: usize) -> CMatrix {
        linalg::to_matrix(self.cell(i, j), self.dim)
    }

    pub fn blocks(&self) -> std::slice::ChunksExact<'_, Complex64> {
        self.values.chunks_exact(self.block_len())
    }

    /// Entry `(a, b)` of every cell as its own complex field, row-major.
    pub fn element(&self, a: usize, b: usize) -> Vec<Complex64> {
        self.blocks().map(|blk| blk[a * self.dim + b]).collect()
    }

    pub fn partial(&self, axis: Axis) -> MatrixField {
        self.partial_with(axis, DerivativeScheme::default())
    }

    /// Derivative along `axis`. Real stencil weights keep Hermiticity.
    pub fn partial_with(&self, axis: Axis, scheme: DerivativeScheme) -> MatrixField {
        let values = differentiate(&self.values, &self.grid, self.block_len(), axis, scheme);
        self.with_values(values, self.hermitian)
    }

    pub fn partial_x(&self) -> MatrixField {
        self.partial(Axis::X)
    }

    pub fn partial_p(&self) -> MatrixField {
        self.partial(Axis::P)
    }

    /// Cellwise trace (real part).
    pub fn trace_field(&self) -> ScalarField {
        let d = self.dim;
        let values = self.blocks().map(|b| linalg::trace(b, d).re).collect();
        ScalarField { grid: self.grid, values }
    }

    /// Phase-space integral: Riemann sum over cells times `dx * dp`.
    pub fn integrate(&self) -> CMatrix {
        let b = self.block_len();
        let mut acc = vec![Complex64::new(0.0, 0.0); b];
        for blk in self.blocks() {
            for (a, v) in acc.iter_mut().zip(blk) {
                *a += v;
            }
        }
        let area = self.grid.cell_area();
        for a in acc.iter_mut() {
            *a *= area;
        }
        linalg::to_matrix(&acc, self.dim)
    }

    /// Integral of the cellwise trace.
    pub fn total_trace(&self) -> f64 {
        let d = self.dim;
        self.blocks().map(|b| linalg::trace(b, d).re).sum::<f64>() * self.grid.cell_area()
    }

    pub fn scaled(&self, s: f64) -> MatrixField {
        self.with_values(self.values.iter().map(|v| v * s).collect(), self.hermitian)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &MatrixField) -> Result<MatrixField> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b * alpha).collect();
        Ok(self.with_values(values, self.hermitian && other.hermitian))
    }

    /// Largest entrywise Hermiticity defect over all cells.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        self.values
            .par_chunks_exact(d * d)
            .with_min_len(1024)
            .map(|b| linalg::hermiticity_defect(b, d))
            .reduce(|| 0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Sum over cells of the entrywise absolute values, times the cell area.
    pub fn l1_distance(&self, other: &MatrixField) -> Result<f64> {
        self.check_compatible(other)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).sum();
        Ok(s * self.grid.cell_area())
    }

    pub fn check_compatible(&self, other: &MatrixField) -> Result<()> {
        check_grid(&self.grid, &other.grid)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }
}

pub(crate) fn check_grid(a: &PhaseGrid, b: &PhaseGrid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `{a, b}_P = d_x a d_p b - d_p a d_x b` for scalar fields.
pub fn poisson_bracket_scalar(a: &ScalarField, b: &ScalarField) -> Result<ScalarField> {
    check_grid(a.grid(), b.grid())?;
    let (ax, ap) = (a.partial_x(), a.partial_p());
    let (bx, bp) = (b.partial_x(), b.partial_p());
    let values = (0..a.values.len())
        .map(|c| ax.values[c] * bp.values[c] - ap.values[c] * bx.values[c])
        .collect();
    Ok(ScalarField { grid: *a.grid(), values })
}

/// `{A, B}_P = d_x A d_p B - d_p A d_x B` with matrix products in the written
/// order. Not antisymmetric for non-commuting fields.
pub fn poisson_bracket(a: &MatrixField, b: &MatrixField) -> Result<MatrixField> {
    a.check_compatible(b)?;
    let d = a.dim;
    let bl = d * d;
    let (ax, ap) = (a.partial_x(), a.partial_p());
    let (bx, bp) = (b.partial_x(), b.partial_p());
    let mut values = vec![Complex64::new(0.0, 0.0); a.values.len()];
    values.par_chunks_mut(bl).enumerate().for_each(|(c, out)| {
        let r = c * bl..(c + 1) * bl;
        linalg::add_product(&ax.values[r.clone()], &bp.values[r.clone()], 1.0, out, d);
        linalg::add_product(&ap.values[r.clone()], &bx.values[r], -1.0, out, d);
    });
    let mut out = a.with_values(values, false);
    out.refresh_hermitian_flag();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn grid() -> PhaseGrid {
        PhaseGrid::standard()
    }

    fn interior(g: &PhaseGrid, i: usize, j: usize) -> bool {
        let m = 4;
        i >= m && j >= m && i + m < g.n_x && j + m < g.n_p
    }

    #[test]
    fn derivative_of_linear_field_is_exact() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, _| x);
        let dx = f.partial_x();
        assert!(dx.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let dp = ScalarField::from_fn(g, |_, p| p).partial_x();
        assert!(dp.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn derivative_of_square_matches_symbolic() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, _| x * x);
        let d = f.partial_x();
        let mut worst: f64 = 0.0;
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                worst = worst.max((d.get(i, j) - 2.0 * g.x(i)).abs());
            }
        }
        // exact for quadratics everywhere, including the one-sided edges
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn second_order_scheme_matches_plain_central_difference() {
        let g = grid();
        let f = ScalarField::from_fn(g, |x, p| (0.3 * x).sin() * p.cos());
        let d = f.partial_with(Axis::X, DerivativeScheme::second_order());
        let h = g.dx();
        for i in 1..g.n_x - 1 {
            let expect = (f.get(i + 1, 5) - f.get(i - 1, 5)) / (2.0 * h);
            assert!((d.get(i, 5) - expect).abs() < 1e-13);
        }
        let edge = (-3.0 * f.get(0, 5) + 4.0 * f.get(1, 5) - f.get(2, 5)) / (2.0 * h);
        assert!((d.get(0, 5) - edge).abs() < 1e-12);
    }

    #[test]
    fn canonical_brackets() {
        let g = grid();
        let x = ScalarField::from_fn(g, |x, _| x);
        let p = ScalarField::from_fn(g, |_, p| p);
        let xp = poisson_bracket_scalar(&x, &p).unwrap();
        let px = poisson_bracket_scalar(&p, &x).unwrap();
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                assert!((xp.get(i, j) - 1.0).abs() < 1e-12);
                assert!((px.get(i, j) + 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matrix_bracket_respects_operator_order() {
        let g = grid();
        let a = MatrixField::outer(&pauli::sigma3(), &ScalarField::from_fn(g, |x, _| x));
        let b = MatrixField::outer(&pauli::sigma1(), &ScalarField::from_fn(g, |_, p| p));
        let ab = poisson_bracket(&a, &b).unwrap();
        let ba = poisson_bracket(&b, &a).unwrap();
        // hand product: sigma3 * sigma1 = [[0, 1], [-1, 0]]
        let expect = [0.0, 1.0, -1.0, 0.0];
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                if !interior(&g, i, j) {
                    continue;
                }
                for (k, e) in expect.iter().enumerate() {
                    assert!((ab.cell(i, j)[k] - Complex64::new(*e, 0.0)).norm() < 1e-12);
                    // {B, A} = -sigma1 sigma3 = sigma3 sigma1 as well
                    assert!((ba.cell(i, j)[k] - Complex64::new(*e, 0.0)).norm() < 1e-12);
                }
            }
        }
        assert!(!ab.is_hermitian());
    }

    #[test]
    fn bracket_rejects_mismatched_grids() {
        let a = ScalarField::zeros(grid());
        let b = ScalarField::zeros(PhaseGrid::square(4.0, 32).unwrap());
        assert!(matches!(poisson_bracket_scalar(&a, &b), Err(Error::GridMismatch)));
        let ma = MatrixField::zeros(grid(), 2);
        let mb = MatrixField::zeros(grid(), 3);
        assert!(matches!(poisson_bracket(&ma, &mb), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn integrate_product_and_uniform_fields() {
        let g = grid();
        let gauss = ScalarField::from_fn(g, |x, p| (-(x * x + p * p) / 2.0).exp() / (2.0 * std::f64::consts::PI));
        assert!((gauss.integrate() - 1.0).abs() < 1e-10);

        let uniform = ScalarField::from_fn(g, |_, _| 0.25);
        assert!((uniform.integrate() - 0.25 * 256.0).abs() < 1e-10);

        let rho_q = pauli::projector(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let product = MatrixField::outer(&rho_q, &gauss);
        let m = product.integrate();
        for r in 0..2 {
            for c in 0..2 {
                assert!((m[(r, c)] - rho_q[(r, c)]).norm() < 1e-10);
            }
        }
        assert!(product.is_hermitian());
    }

    #[test]
    fn derivatives_keep_hermitian_flag() {
        let g = grid();
        let rho_q = pauli::projector(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let f = MatrixField::outer(&rho_q, &ScalarField::from_fn(g, |x, p| (-(x * x + 2.0 * p * p)).exp()));
        assert!(f.partial_x().is_hermitian());
        assert!(f.partial_p().hermiticity_defect() < 1e-12);
    }
}
