use serde::Serialize;

use crate::phase_space::cell_center;
use crate::{Complex64, Error, Result};

/// Uniform cell-centred grid on a line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineGrid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl LineGrid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("line grid needs at least 2 cells, got {n}")));
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::InvalidGrid(format!("bad line extent [{min}, {max}]")));
        }
        Ok(LineGrid { min, max, n })
    }

    /// Odd-sized grid with spacing `h` whose middle node sits exactly at 0
    /// and which reaches at least `half_width` on both sides.
    pub fn centered_on_zero(half_width: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("bad centred grid: half width {half_width}, spacing {h}")));
        }
        let k = (half_width / h).ceil() as usize;
        let n = 2 * k + 1;
        let edge = n as f64 * h / 2.0;
        Self::new(-edge, edge, n)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        cell_center(self.min, self.max, self.n, i)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Same spacing and node alignment, `cells` more cells on each side.
    pub fn extended(&self, cells: usize) -> LineGrid {
        let h = self.spacing();
        LineGrid {
            min: self.min - cells as f64 * h,
            max: self.max + cells as f64 * h,
            n: self.n + 2 * cells,
        }
    }

    /// Same extent with every cell split into `factor` cells.
    pub fn refined(&self, factor: usize) -> LineGrid {
        LineGrid { n: self.n * factor.max(1), ..*self }
    }

    /// Fractional node coordinate of `q`: node `i` sits at `i as f64`.
    pub fn fractional_index(&self, q: f64) -> f64 {
        (q - self.point(0)) / self.spacing()
    }

    /// Linear interpolation of node values; zero outside the outermost nodes.
    pub fn interpolate(&self, values: &[Complex64], q: f64) -> Complex64 {
        let t = self.fractional_index(q);
        let last = (self.n - 1) as f64;
        if !(t >= 0.0 && t <= last) {
            return Complex64::new(0.0, 0.0);
        }
        let k = (t.floor() as usize).min(self.n - 2);
        let f = t - k as f64;
        values[k] * (1.0 - f) + values[k + 1] * f
    }
}

/// Complex amplitudes of a one-dimensional coordinate on a [`LineGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: LineGrid,
    amps: Vec<Complex64>,
}

impl WaveFunction {
    /// Raw amplitudes, not normalised.
    pub fn from_amplitudes(grid: LineGrid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.n {
            return Err(Error::InvalidGrid(format!("{} amplitudes for {} cells", amps.len(), grid.n)));
        }
        if amps.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::InvalidGrid("non-finite amplitude".into()));
        }
        Ok(WaveFunction { grid, amps })
    }

    /// Sample `f` at the nodes and normalise.
    pub fn from_fn(grid: LineGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let amps = grid.points().into_iter().map(f).collect();
        Self::from_amplitudes(grid, amps)?.normalized()
    }

    /// Gaussian whose density has the given centre and variance.
    pub fn gaussian(grid: LineGrid, center: f64, variance: f64) -> Result<Self> {
        Self::superposition(grid, &[(Complex64::new(1.0, 0.0), center, variance)])
    }

    /// Normalised `sum_k c_k g_k(q)` with `g_k` the Gaussian amplitude of
    /// centre and density variance given by the tuple.
    pub fn superposition(grid: LineGrid, terms: &[(Complex64, f64, f64)]) -> Result<Self> {
        if terms.iter().any(|t| !(t.2 > 0.0)) {
            return Err(Error::InvalidHitParams("Gaussian variance must be positive".into()));
        }
        Self::from_fn(grid, |q| {
            terms
                .iter()
                .map(|&(c, mu, var)| c * gaussian_amplitude(q - mu, var))
                .sum()
        })
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `sum |psi|^2 dq`.
    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::InvalidHitParams(format!("cannot normalise a state of squared norm {n2:e}")));
        }
        let s = 1.0 / n2.sqrt();
        for a in &mut self.amps {
            *a *= s;
        }
        Ok(self)
    }

    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<q>` under `|psi|^2`.
    pub fn mean(&self) -> f64 {
        let pts = self.grid.points();
        let (m0, m1) = self
            .amps
            .iter()
            .zip(&pts)
            .fold((0.0, 0.0), |(a, b), (psi, q)| (a + psi.norm_sqr(), b + psi.norm_sqr() * q));
        m1 / m0
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let pts = self.grid.points();
        let (m0, m2) = self
            .amps
            .iter()
            .zip(&pts)
            .fold((0.0, 0.0), |(a, b), (psi, q)| (a + psi.norm_sqr(), b + psi.norm_sqr() * (q - mu).powi(2)));
        m2 / m0
    }

    /// Probability carried by cells with `lo <= q <= hi`.
    pub fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let h = self.grid.spacing();
        self.grid
            .points()
            .iter()
            .zip(&self.amps)
            .filter(|(q, _)| **q >= lo && **q <= hi)
            .map(|(_, a)| a.norm_sqr() * h)
            .sum()
    }

    /// L2 distance between two states on the same grid.
    pub fn l2_distance(&self, other: &WaveFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s: f64 = self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum();
        Ok((s * self.grid.spacing()).sqrt())
    }
}

/// `(2 pi var)^(-1/4) exp(-u^2 / (4 var))`.
pub(crate) fn gaussian_amplitude(u: f64, var: f64) -> f64 {
    (2.0 * std::f64::consts::PI * var).powf(-0.25) * (-u * u / (4.0 * var)).exp()
}

/// Amplitudes on the product grid `system x pointer`, system index slow.
#[derive(Clone, Debug)]
pub struct CompositeWaveFunction {
    pub(crate) system: LineGrid,
    pub(crate) pointer: LineGrid,
    pub(crate) amps: Vec<Complex64>,
}

impl CompositeWaveFunction {
    pub fn system_grid(&self) -> &LineGrid {
        &self.system
    }

    pub fn pointer_grid(&self) -> &LineGrid {
        &self.pointer
    }

    pub fn amplitude(&self, iq: usize, ia: usize) -> Complex64 {
        self.amps[iq * self.pointer.n + ia]
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.system.spacing() * self.pointer.spacing()
    }

    /// Marginal density of the pointer coordinate.
    pub fn pointer_density(&self) -> Vec<f64> {
        let na = self.pointer.n;
        let hq = self.system.spacing();
        let mut out = vec![0.0; na];
        for row in self.amps.chunks_exact(na) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.norm_sqr() * hq;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centred_grid_has_node_at_zero() {
        let g = LineGrid::centered_on_zero(3.0, 0.1).unwrap();
        assert_eq!(g.n % 2, 1);
        assert_eq!(g.point(g.n / 2), 0.0);
        assert!(g.min <= -3.0 && g.max >= 3.0);
        assert!((g.spacing() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn extension_keeps_nodes() {
        let g = LineGrid::new(-2.0, 2.0, 40).unwrap();
        let e = g.extended(7);
        for i in 0..g.n {
            assert!((e.point(i + 7) - g.point(i)).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_moments() {
        let g = LineGrid::new(-10.0, 10.0, 1000).unwrap();
        let psi = WaveFunction::gaussian(g, 1.5, 0.7).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        assert!((psi.mean() - 1.5).abs() < 1e-10);
        assert!((psi.variance() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn interpolation_is_exact_at_nodes_and_zero_outside() {
        let g = LineGrid::new(0.0, 1.0, 10).unwrap();
        let v: Vec<Complex64> = (0..10).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        assert!((g.interpolate(&v, g.point(3)) - v[3]).norm() < 1e-12);
        let mid = g.interpolate(&v, 0.5 * (g.point(3) + g.point(4)));
        assert!((mid - Complex64::new(3.5, -3.5)).norm() < 1e-12);
        assert_eq!(g.interpolate(&v, 2.0), Complex64::new(0.0, 0.0));
    }
}
