//! Per-cell dense matrix helpers.
//!
//! Matrix fields store each cell's d x d block as a row-major slice of
//! `d * d` complex numbers. These routines work on such slices directly so the
//! hot loops never allocate.

use crate::{CMatrix, Complex64};

/// `out = a * b` for row-major d x d blocks.
#[inline]
pub fn matmul_into(a: &[Complex64], b: &[Complex64], out: &mut [Complex64], d: usize) {
    for r in 0..d {
        for c in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += a[r * d + k] * b[k * d + c];
            }
            out[r * d + c] = acc;
        }
    }
}

/// `out += scale * (a * b - b * a)`.
#[inline]
pub fn add_commutator(
    a: &[Complex64],
    b: &[Complex64],
    scale: Complex64,
    out: &mut [Complex64],
    d: usize,
) {
    for r in 0..d {
        for c in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += a[r * d + k] * b[k * d + c] - b[r * d + k] * a[k * d + c];
            }
            out[r * d + c] += scale * acc;
        }
    }
}

/// `out += scale * a * b`.
#[inline]
pub fn add_product(
    a: &[Complex64],
    b: &[Complex64],
    scale: f64,
    out: &mut [Complex64],
    d: usize,
) {
    for r in 0..d {
        for c in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += a[r * d + k] * b[k * d + c];
            }
            out[r * d + c] += acc * scale;
        }
    }
}

#[inline]
pub fn trace(m: &[Complex64], d: usize) -> Complex64 {
    (0..d).map(|k| m[k * d + k]).sum()
}

/// Real part of `tr(a * b)`.
#[inline]
pub fn trace_product(a: &[Complex64], b: &[Complex64], d: usize) -> f64 {
    let mut acc = 0.0;
    for r in 0..d {
        for k in 0..d {
            acc += (a[r * d + k] * b[k * d + r]).re;
        }
    }
    acc
}

/// Largest entrywise deviation from Hermiticity, `max |m_ab - conj(m_ba)|`.
pub fn hermiticity_defect(m: &[Complex64], d: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..d {
        for c in r..d {
            worst = worst.max((m[r * d + c] - m[c * d + r].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part of a d x d block, ascending.
///
/// d = 1 and d = 2 are closed form, larger blocks go through nalgebra's
/// Hermitian eigensolver.
pub fn hermitian_eigenvalues(m: &[Complex64], d: usize) -> Vec<f64> {
    match d {
        1 => vec![m[0].re],
        2 => {
            let a = m[0].re;
            let c = m[3].re;
            let b = 0.5 * (m[1] + m[2].conj());
            let mean = 0.5 * (a + c);
            let half_gap = 0.5 * (a - c);
            let r = (half_gap * half_gap + b.norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let mat = to_matrix(m, d);
            let herm = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
            let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(|x, y| x.total_cmp(y));
            ev
        }
    }
}

pub fn min_eigenvalue(m: &[Complex64], d: usize) -> f64 {
    hermitian_eigenvalues(m, d)[0]
}

/// Trace norm of a Hermitian block (sum of absolute eigenvalues).
pub fn trace_norm(m: &[Complex64], d: usize) -> f64 {
    hermitian_eigenvalues(m, d).iter().map(|e| e.abs()).sum()
}

/// Spectral norm of a Hermitian block (largest absolute eigenvalue).
pub fn spectral_norm(m: &[Complex64], d: usize) -> f64 {
    hermitian_eigenvalues(m, d)
        .iter()
        .fold(0.0_f64, |acc, e| acc.max(e.abs()))
}

pub fn to_matrix(m: &[Complex64], d: usize) -> CMatrix {
    CMatrix::from_row_slice(d, d, m)
}

pub fn from_matrix(m: &CMatrix) -> Vec<Complex64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * d);
    for r in 0..d {
        for c in 0..d {
            out.push(m[(r, c)]);
        }
    }
    out
}

/// Pauli matrices and identity, for spin-1/2 blocks in the sigma_3 basis
/// (index 0 is |+>, index 1 is |->).
pub mod pauli {
    use crate::{CMatrix, Complex64};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn sigma1() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn sigma2() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn sigma3() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    /// Projector |psi><psi| for a two-component amplitude vector.
    pub fn projector(c_plus: Complex64, c_minus: Complex64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                c_plus * c_plus.conj(),
                c_plus * c_minus.conj(),
                c_minus * c_plus.conj(),
                c_minus * c_minus.conj(),
            ],
        )
    }
}
