//! Impulsive spin-pointer coupling `g delta(t) p sigma3`: the closed-form
//! propagator, its numeric counterpart and the pointer readout.

mod propagate;
mod readout;

use serde::{Deserialize, Serialize};

use crate::hybrid::{product_state, ClassicalDistribution, HybridState};
use crate::linalg::pauli;
use crate::phase_space::{PhaseGrid, ScalarField};
use crate::{CMatrix, Complex64, Error, Result};

pub use propagate::{analytic_propagate, diagonal_final_state, numeric_propagate, MULTIPLIER_LIMIT, ROUNDOFF_FLOOR, SPECTRAL_FLOOR};
pub use readout::{marginal_coherence, offdiag_norm, readout, Readout};

/// Tolerance on `|c+|^2 + |c-|^2 = 1`.
pub const AMPLITUDE_TOL: f64 = 1e-12;

/// Couplings below this make the readout too coarse to separate the branches.
pub const MIN_VALID_G: f64 = 3.0;

/// The initial pointer state must fit inside this half-width in both axes.
pub const POINTER_HALF_WIDTH: f64 = 8.0;

/// `x` in `[-16, 16]` with 256 cells, `p` in `[-8, 8]` with 128 cells. Room
/// for shifts up to `g = 8` with an 8-sigma margin, and integer cell shifts
/// for integer and half-integer `g` up to the eighth.
pub fn default_grid() -> PhaseGrid {
    PhaseGrid { x_min: -16.0, x_max: 16.0, n_x: 256, p_min: -8.0, p_max: 8.0, n_p: 128 }
}

/// Spin state `c+ |+> + c- |->`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinAmplitudes {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl SpinAmplitudes {
    pub fn new(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let n = c_plus.norm_sqr() + c_minus.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > AMPLITUDE_TOL {
            return Err(Error::InvalidAmplitudes(format!("|c+|^2 + |c-|^2 = {n}, expected 1")));
        }
        Ok(SpinAmplitudes { c_plus, c_minus })
    }

    /// `c+ = c- = 1/sqrt 2`.
    pub fn balanced() -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        SpinAmplitudes { c_plus: a, c_minus: a }
    }

    /// `|c+|^2 = weight`, with relative phase `phase` on `c-`.
    pub fn with_weight(weight: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidAmplitudes(format!("weight {weight} outside [0, 1]")));
        }
        Self::new(
            Complex64::new(weight.sqrt(), 0.0),
            Complex64::from_polar((1.0 - weight).sqrt(), phase),
        )
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.c_plus.norm_sqr(), self.c_minus.norm_sqr())
    }

    pub fn density_matrix(&self) -> CMatrix {
        pauli::projector(self.c_plus, self.c_minus)
    }
}

/// Pointer distribution before the impulse.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassicalProfile {
    /// Product Gaussian; the closed-form propagator continues it analytically
    /// to complex momentum.
    Gaussian { x0: f64, p0: f64, var_x: f64, var_p: f64 },
    /// Arbitrary tabulated density. Only the numeric path accepts it.
    Sampled(ScalarField),
}

impl ClassicalProfile {
    /// Centred, unit variances.
    pub fn standard() -> Self {
        ClassicalProfile::Gaussian { x0: 0.0, p0: 0.0, var_x: 1.0, var_p: 1.0 }
    }

    pub fn distribution(&self, grid: PhaseGrid) -> Result<ClassicalDistribution> {
        match self {
            ClassicalProfile::Gaussian { x0, p0, var_x, var_p } => {
                ClassicalDistribution::gaussian(grid, *x0, *p0, *var_x, *var_p)
            }
            ClassicalProfile::Sampled(f) => {
                if *f.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                ClassicalDistribution::new(f.clone())
            }
        }
    }
}

/// Coupling strength; the readout precision is `1 / g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SgParams {
    pub g: f64,
}

impl SgParams {
    pub fn new(g: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::Validation("g must be positive".into()));
        }
        Ok(SgParams { g })
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.g
    }

    /// Whether the readout is sharp, `g >= 3`.
    pub fn is_sharp(&self) -> bool {
        self.g >= MIN_VALID_G
    }

    pub fn warning(&self) -> Option<String> {
        (!self.is_sharp()).then(|| {
            format!("g = {} gives readout precision {:.3}, not small; branches overlap", self.g, self.delta())
        })
    }
}

/// `|in><in|` times the standard Gaussian pointer.
pub fn initial_state(spin: SpinAmplitudes, grid: PhaseGrid) -> Result<HybridState> {
    initial_state_with(spin, &ClassicalProfile::standard(), grid)
}

pub fn initial_state_with(spin: SpinAmplitudes, profile: &ClassicalProfile, grid: PhaseGrid) -> Result<HybridState> {
    let w = POINTER_HALF_WIDTH;
    if !grid.contains_box(-w, w, -w, w) {
        return Err(Error::GridTooNarrow(format!("pointer grid must contain [-{w}, {w}]^2")));
    }
    product_state(&spin.density_matrix(), &profile.distribution(grid)?)
}

/// Which propagator produced a final state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagationPath {
    Analytic,
    Numeric,
}

impl std::str::FromStr for PropagationPath {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(PropagationPath::Analytic),
            "numeric" => Ok(PropagationPath::Numeric),
            other => Err(format!("unknown path '{other}', expected analytic or numeric")),
        }
    }
}

impl PropagationPath {
    pub fn name(&self) -> &'static str {
        match self {
            PropagationPath::Analytic => "analytic",
            PropagationPath::Numeric => "numeric",
        }
    }
}
