use crate::linalg;
use crate::phase_space::{check_grid, MatrixField, PhaseGrid, ScalarField};
use crate::{CMatrix, Complex64, Error, Result};

/// `H(x, p) = h_q + h_c(x, p) + h_int(x, p)`.
#[derive(Clone, Debug)]
pub struct HybridHamiltonian {
    h_q: CMatrix,
    h_c: ScalarField,
    h_int: MatrixField,
}

impl HybridHamiltonian {
    pub fn new(h_q: CMatrix, h_c: ScalarField, h_int: MatrixField) -> Result<Self> {
        let d = h_int.dim();
        if h_q.nrows() != d || h_q.ncols() != d {
            return Err(Error::DimMismatch { expected: d, found: h_q.nrows() });
        }
        check_grid(h_c.grid(), h_int.grid())?;
        let defect = linalg::hermiticity_defect(&linalg::from_matrix(&h_q), d);
        if defect > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("quantum Hamiltonian is not Hermitian (defect {defect:e})")));
        }
        let defect = h_int.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("interaction is not Hermitian (defect {defect:e})")));
        }
        Ok(HybridHamiltonian { h_q, h_c, h_int })
    }

    pub fn zero(grid: PhaseGrid, dim: usize) -> Self {
        HybridHamiltonian {
            h_q: CMatrix::zeros(dim, dim),
            h_c: ScalarField::zeros(grid),
            h_int: MatrixField::zeros(grid, dim),
        }
    }

    /// Purely classical `h_c`, acting as a multiple of the identity.
    pub fn classical(h_c: ScalarField, dim: usize) -> Self {
        let grid = *h_c.grid();
        HybridHamiltonian { h_q: CMatrix::zeros(dim, dim), h_c, h_int: MatrixField::zeros(grid, dim) }
    }

    /// Purely quantum, the same `h_q` everywhere.
    pub fn quantum(h_q: CMatrix, grid: PhaseGrid) -> Result<Self> {
        let d = h_q.nrows();
        Self::new(h_q, ScalarField::zeros(grid), MatrixField::zeros(grid, d))
    }

    /// `(x^2 + p^2) / 2`.
    pub fn harmonic(grid: PhaseGrid, dim: usize) -> Self {
        Self::classical(ScalarField::from_fn(grid, |x, p| 0.5 * (x * x + p * p)), dim)
    }

    /// Add `lambda * x * m` to the interaction.
    pub fn with_x_coupling(self, lambda: f64, m: &CMatrix) -> Result<Self> {
        let coord = ScalarField::from_fn(*self.h_c.grid(), move |x, _| lambda * x);
        self.with_interaction(&MatrixField::outer(m, &coord))
    }

    /// Add `lambda * p * m` to the interaction.
    pub fn with_p_coupling(self, lambda: f64, m: &CMatrix) -> Result<Self> {
        let coord = ScalarField::from_fn(*self.h_c.grid(), move |_, p| lambda * p);
        self.with_interaction(&MatrixField::outer(m, &coord))
    }

    pub fn with_interaction(self, extra: &MatrixField) -> Result<Self> {
        let h_int = self.h_int.add_scaled(1.0, extra)?;
        Self::new(self.h_q, self.h_c, h_int)
    }

    pub fn h_q(&self) -> &CMatrix {
        &self.h_q
    }

    pub fn h_c(&self) -> &ScalarField {
        &self.h_c
    }

    pub fn h_int(&self) -> &MatrixField {
        &self.h_int
    }

    pub fn grid(&self) -> &PhaseGrid {
        self.h_c.grid()
    }

    pub fn dim(&self) -> usize {
        self.h_int.dim()
    }

    /// Full field and its phase-space derivatives, computed once.
    pub fn prepare(&self) -> PreparedHamiltonian {
        let d = self.dim();
        let hq = linalg::from_matrix(&self.h_q);
        let mut h = self.h_int.values().to_vec();
        for (blk, c) in h.chunks_exact_mut(d * d).zip(self.h_c.values()) {
            for (k, v) in blk.iter_mut().enumerate() {
                *v += hq[k];
            }
            for k in 0..d {
                blk[k * d + k] += Complex64::new(*c, 0.0);
            }
        }
        // h_q is constant, so only the fields contribute to the derivatives
        let hx = self.h_int.partial_x().add_scaled(1.0, &self.h_c.partial_x().to_matrix_field(d)).unwrap();
        let hp = self.h_int.partial_p().add_scaled(1.0, &self.h_c.partial_p().to_matrix_field(d)).unwrap();
        PreparedHamiltonian {
            grid: *self.grid(),
            dim: d,
            h,
            hx: hx.values().to_vec(),
            hp: hp.values().to_vec(),
        }
    }
}

/// Cell blocks of `H`, `d_x H` and `d_p H`.
#[derive(Clone, Debug)]
pub struct PreparedHamiltonian {
    pub(crate) grid: PhaseGrid,
    pub(crate) dim: usize,
    pub(crate) h: Vec<Complex64>,
    pub(crate) hx: Vec<Complex64>,
    pub(crate) hp: Vec<Complex64>,
}

impl PreparedHamiltonian {
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest spectral norm of `d_x H` or `d_p H` over all cells: the
    /// fastest transport speed of the bracket terms.
    pub fn v_max(&self) -> f64 {
        let d = self.dim;
        self.hx
            .chunks_exact(d * d)
            .chain(self.hp.chunks_exact(d * d))
            .map(|b| linalg::spectral_norm(b, d))
            .fold(0.0, f64::max)
    }

    /// `0.25 * min(dx, dp) / v_max`, infinite without transport.
    pub fn dt_max(&self) -> f64 {
        let v = self.v_max();
        if v > 0.0 {
            0.25 * self.grid.dx().min(self.grid.dp()) / v
        } else {
            f64::INFINITY
        }
    }

    pub(crate) fn check(&self, f: &MatrixField) -> Result<()> {
        check_grid(&self.grid, f.grid())?;
        if f.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, found: f.dim() });
        }
        Ok(())
    }
}
