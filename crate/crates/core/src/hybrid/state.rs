use rayon::prelude::*;
use serde::Serialize;

use crate::linalg;
use crate::phase_space::{MatrixField, PhaseGrid, ScalarField};
use crate::{CMatrix, Complex64, Error, Result};

/// Smallest eigenvalue tolerated before a cell counts as negative.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Conditional states are only formed where the classical density exceeds
/// this fraction of its maximum.
pub const CONDITIONING_THRESHOLD: f64 = 1e-12;

/// Tolerance on the total probability of a hybrid state.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// Nonnegative phase-space density with unit integral.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalDistribution {
    field: ScalarField,
}

impl ClassicalDistribution {
    pub fn new(field: ScalarField) -> Result<Self> {
        let min = field.values().iter().fold(f64::INFINITY, |m, v| m.min(*v));
        if min < 0.0 {
            return Err(Error::InvalidDistribution(format!("negative density {min:e}")));
        }
        let mass = field.integrate();
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("total mass {mass} is not 1")));
        }
        Ok(ClassicalDistribution { field })
    }

    /// Rescale a nonnegative field to unit mass.
    pub fn normalized(field: ScalarField) -> Result<Self> {
        let mass = field.integrate();
        if !(mass > 0.0) {
            return Err(Error::InvalidDistribution(format!("total mass {mass} cannot be normalised")));
        }
        Self::new(field.scaled(1.0 / mass))
    }

    /// Product Gaussian centred at `(x0, p0)` with per-axis variances,
    /// renormalised on the grid.
    pub fn gaussian(grid: PhaseGrid, x0: f64, p0: f64, var_x: f64, var_p: f64) -> Result<Self> {
        if !(var_x > 0.0 && var_p > 0.0) {
            return Err(Error::InvalidDistribution("variances must be positive".into()));
        }
        Self::normalized(ScalarField::from_fn(grid, move |x, p| {
            (-(x - x0).powi(2) / (2.0 * var_x) - (p - p0).powi(2) / (2.0 * var_p)).exp()
        }))
    }

    /// `exp(-(x^2 + p^2) / 2) / 2 pi`.
    pub fn standard(grid: PhaseGrid) -> Result<Self> {
        Self::gaussian(grid, 0.0, 0.0, 1.0, 1.0)
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn into_field(self) -> ScalarField {
        self.field
    }

    /// Mean `(x, p)`.
    pub fn mean(&self) -> (f64, f64) {
        let g = self.field.grid();
        let a = g.cell_area();
        let (mut mx, mut mp) = (0.0, 0.0);
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                let v = self.field.get(i, j) * a;
                mx += v * g.x(i);
                mp += v * g.p(j);
            }
        }
        (mx, mp)
    }

    /// Per-axis variances `(var_x, var_p)`.
    pub fn variances(&self) -> (f64, f64) {
        let g = self.field.grid();
        let a = g.cell_area();
        let (x0, p0) = self.mean();
        let (mut vx, mut vp) = (0.0, 0.0);
        for i in 0..g.n_x {
            for j in 0..g.n_p {
                let v = self.field.get(i, j) * a;
                vx += v * (g.x(i) - x0).powi(2);
                vp += v * (g.p(j) - p0).powi(2);
            }
        }
        (vx, vp)
    }
}

/// Field of Hermitian d x d blocks with unit total trace.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    field: MatrixField,
}

impl HybridState {
    /// Checks Hermiticity and normalisation. Positivity is reported, not
    /// enforced; see [`positivity_report`].
    pub fn new(mut field: MatrixField) -> Result<Self> {
        if !field.refresh_hermitian_flag() {
            return Err(Error::InvalidDensityMatrix(format!(
                "hybrid state is not Hermitian (defect {:e})",
                field.hermiticity_defect()
            )));
        }
        let tr = field.total_trace();
        if (tr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDensityMatrix(format!("total trace {tr} is not 1")));
        }
        Ok(HybridState { field })
    }

    pub(crate) fn from_field_unchecked(field: MatrixField) -> Self {
        HybridState { field }
    }

    pub fn field(&self) -> &MatrixField {
        &self.field
    }

    pub fn into_field(self) -> MatrixField {
        self.field
    }

    pub fn grid(&self) -> &PhaseGrid {
        self.field.grid()
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }
}

/// Check that `rho` is a density matrix: Hermitian, unit trace, PSD.
pub fn check_density_matrix(rho: &CMatrix) -> Result<()> {
    if !rho.is_square() || rho.nrows() == 0 {
        return Err(Error::InvalidDensityMatrix("density matrix must be square".into()));
    }
    let d = rho.nrows();
    let block = linalg::from_matrix(rho);
    let defect = linalg::hermiticity_defect(&block, d);
    if defect > 1e-12 {
        return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {defect:e})")));
    }
    let tr = linalg::trace(&block, d).re;
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
    }
    let min = linalg::min_eigenvalue(&block, d);
    if min < -1e-12 {
        return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// `rho_q * rho_c(x, p)` cell by cell.
pub fn product_state(rho_q: &CMatrix, rho_c: &ClassicalDistribution) -> Result<HybridState> {
    check_density_matrix(rho_q)?;
    HybridState::new(MatrixField::outer(rho_q, rho_c.field()))
}

/// Cellwise trace.
pub fn classical_marginal(state: &HybridState) -> ScalarField {
    state.field.trace_field()
}

/// Phase-space integral.
pub fn quantum_marginal(state: &HybridState) -> CMatrix {
    state.field.integrate()
}

/// `rho(x, p) / rho_c(x, p)` at cell `(i, j)`, with the default threshold.
pub fn conditional_state(state: &HybridState, i: usize, j: usize) -> Result<CMatrix> {
    conditional_state_with(state, i, j, CONDITIONING_THRESHOLD)
}

/// As [`conditional_state`], with the threshold relative to the largest cell
/// mass given explicitly.
pub fn conditional_state_with(state: &HybridState, i: usize, j: usize, relative: f64) -> Result<CMatrix> {
    let d = state.dim();
    let threshold = relative * state.field.trace_field().max_abs();
    let block = state.field.cell(i, j);
    let mass = linalg::trace(block, d).re;
    if !(mass >= threshold && mass > 0.0) {
        return Err(Error::ConditionOnNullEvent { i, j, mass, threshold });
    }
    Ok(linalg::to_matrix(block, d) / Complex64::new(mass, 0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_eig: f64,
    pub argmin_cell: (usize, usize),
    /// Cells whose smallest eigenvalue is below `-POSITIVITY_TOL`.
    pub n_negative_cells: usize,
}

/// Smallest eigenvalue of every cell block.
pub fn positivity_report(field: &MatrixField) -> PositivityReport {
    let d = field.dim();
    let (min_eig, arg, n_neg) = field
        .values()
        .par_chunks_exact(d * d)
        .with_min_len(1024)
        .enumerate()
        .map(|(c, b)| {
            let e = linalg::min_eigenvalue(b, d);
            (e, c, usize::from(e < -POSITIVITY_TOL))
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, 0),
            |a, b| {
                // lowest eigenvalue wins, ties go to the lower cell index
                let best = if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { (b.0, b.1) } else { (a.0, a.1) };
                (best.0, best.1, a.2 + b.2)
            },
        );
    PositivityReport {
        min_eig,
        argmin_cell: field.grid().unindex(arg),
        n_negative_cells: n_neg,
    }
}
