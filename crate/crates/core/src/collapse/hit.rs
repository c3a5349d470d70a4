//! The Gaussian hitting process and Born-rule sampling of its outcomes.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::chain::ZERO_PROBABILITY;
use super::wave::{LineGrid, WaveFunction};
use crate::phase_space::csv::fmt_f64;
use crate::{Complex64, Error, Result};

/// Outcomes further than this many `delta` outside the system grid are
/// rejected, and the outcome density is tabulated this far out.
pub const OUTCOME_MARGIN: f64 = 6.0;

/// Precision `delta` and pointer reading `qbar` of a single hit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HitParams {
    pub delta: f64,
    pub qbar: f64,
}

impl HitParams {
    pub fn new(delta: f64, qbar: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidHitParams(format!("delta must be positive, got {delta}")));
        }
        if !qbar.is_finite() {
            return Err(Error::InvalidHitParams(format!("qbar must be finite, got {qbar}")));
        }
        Ok(HitParams { delta, qbar })
    }

    fn check_against(&self, g: &LineGrid) -> Result<()> {
        let m = OUTCOME_MARGIN * self.delta;
        if self.qbar < g.min - m || self.qbar > g.max + m {
            return Err(Error::InvalidHitParams(format!(
                "qbar = {} lies outside [{}, {}]",
                self.qbar,
                g.min - m,
                g.max + m
            )));
        }
        Ok(())
    }
}

/// Multiply by the Gaussian of precision `delta` centred at `qbar` and
/// renormalise. Returns the new state and `N^2(qbar)`, the squared norm
/// before renormalisation.
pub fn hit(psi: &WaveFunction, params: HitParams) -> Result<(WaveFunction, f64)> {
    let g = *psi.grid();
    params.check_against(&g)?;
    let HitParams { delta, qbar } = params;
    let c = (2.0 * std::f64::consts::PI * delta * delta).powf(-0.25);
    let amps: Vec<Complex64> = g
        .points()
        .iter()
        .zip(psi.amplitudes())
        .map(|(q, a)| a * (c * (-(qbar - q).powi(2) / (4.0 * delta * delta)).exp()))
        .collect();
    let w = WaveFunction::from_amplitudes(g, amps)?;
    let n2 = w.norm_sq();
    if !(n2 >= ZERO_PROBABILITY) {
        return Err(Error::ZeroProbabilityOutcome { qbar, norm_sq: n2 });
    }
    Ok((w.normalized()?, n2))
}

/// `N^2(qbar)` tabulated on a grid of outcomes.
#[derive(Clone, Debug)]
pub struct OutcomePdf {
    pub grid: LineGrid,
    pub values: Vec<f64>,
}

impl OutcomePdf {
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.spacing()
    }

    pub fn mean(&self) -> f64 {
        let h = self.grid.spacing();
        self.grid.points().iter().zip(&self.values).map(|(q, v)| q * v * h).sum::<f64>() / self.integral()
    }

    /// Probability of `qbar > split`.
    pub fn mass_above(&self, split: f64) -> f64 {
        let h = self.grid.spacing();
        self.grid
            .points()
            .iter()
            .zip(&self.values)
            .filter(|(q, _)| **q > split)
            .map(|(_, v)| v * h)
            .sum()
    }
}

/// Outcome density of a Gaussian hit with precision `delta`.
///
/// The outcome grid keeps the system spacing and extends it by
/// [`OUTCOME_MARGIN`] `delta` on each side; it is refined when `delta` is
/// smaller than two system cells.
pub fn outcome_pdf(psi: &WaveFunction, delta: f64) -> Result<OutcomePdf> {
    HitParams::new(delta, 0.0)?;
    let g = *psi.grid();
    let h = g.spacing();
    let factor = if delta < 2.0 * h { (2.0 * h / delta).ceil() as usize } else { 1 };
    let grid = g.extended((OUTCOME_MARGIN * delta / h).ceil() as usize).refined(factor);
    let q = g.points();
    let rho: Vec<f64> = psi.density().iter().map(|d| d * h).collect();
    let norm = 1.0 / (2.0 * std::f64::consts::PI * delta * delta).sqrt();
    let inv = 1.0 / (2.0 * delta * delta);
    let values = grid
        .points()
        .par_iter()
        .map(|qb| {
            q.iter()
                .zip(&rho)
                .map(|(qi, r)| r * (-(qb - qi).powi(2) * inv).exp())
                .sum::<f64>()
                * norm
        })
        .collect();
    Ok(OutcomePdf { grid, values })
}

/// A sampled outcome with the post-hit state and `N^2(qbar)`.
#[derive(Clone, Debug)]
pub struct OutcomeSample {
    pub qbar: f64,
    pub post_state: WaveFunction,
    pub pdf_value: f64,
}

/// Inverse-CDF sampler over a tabulated outcome density. The CDF is the
/// piecewise-linear interpolant of cumulative trapezoid sums.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    psi: WaveFunction,
    delta: f64,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(psi: &WaveFunction, delta: f64) -> Result<Self> {
        let pdf = outcome_pdf(psi, delta)?;
        let nodes = pdf.grid.points();
        let h = pdf.grid.spacing();
        let mut cdf = Vec::with_capacity(nodes.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in pdf.values.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * h;
            cdf.push(acc);
        }
        Ok(OutcomeSampler { psi: psi.clone(), delta, nodes, cdf })
    }

    /// Draw an outcome only.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = *self.cdf.last().unwrap();
        let u = rng.random::<f64>() * total;
        let k = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let f = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.nodes[k - 1] + f * (self.nodes[k] - self.nodes[k - 1])
    }

    /// Draw an outcome and apply the corresponding hit.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<OutcomeSample> {
        let qbar = self.draw(rng);
        let (post_state, pdf_value) = hit(&self.psi, HitParams::new(self.delta, qbar)?)?;
        Ok(OutcomeSample { qbar, post_state, pdf_value })
    }
}

/// Seeded single draw.
pub fn sample_outcome(psi: &WaveFunction, delta: f64, seed: u64) -> Result<OutcomeSample> {
    OutcomeSampler::new(psi, delta)?.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Apply `n` hits in sequence, each with an outcome drawn from the current
/// state. Returns the final state and the outcomes.
pub fn repeated_hits<R: Rng + ?Sized>(
    psi: &WaveFunction,
    delta: f64,
    n: usize,
    rng: &mut R,
) -> Result<(WaveFunction, Vec<f64>)> {
    let mut state = psi.clone();
    let mut outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        let s = OutcomeSampler::new(&state, delta)?.sample(rng)?;
        outcomes.push(s.qbar);
        state = s.post_state;
    }
    Ok((state, outcomes))
}

/// One row of an ensemble run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleRun {
    pub run: u64,
    pub qbar: f64,
    pub weight: f64,
}

/// `n_runs` independent single hits; run `k` uses seed `base_seed + k`.
pub fn sample_ensemble(psi: &WaveFunction, delta: f64, n_runs: u64, base_seed: u64) -> Result<Vec<EnsembleRun>> {
    let sampler = OutcomeSampler::new(psi, delta)?;
    (0..n_runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(run));
            let qbar = sampler.draw(&mut rng);
            let (_, weight) = hit(psi, HitParams::new(delta, qbar)?)?;
            Ok(EnsembleRun { run, qbar, weight })
        })
        .collect()
}

/// Fractions of outcomes on either side of `split`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchFrequencies {
    pub split: f64,
    pub below: f64,
    pub above: f64,
}

pub fn branch_frequencies(runs: &[EnsembleRun], split: f64) -> BranchFrequencies {
    let n = runs.len().max(1) as f64;
    let above = runs.iter().filter(|r| r.qbar > split).count() as f64 / n;
    BranchFrequencies { split, below: 1.0 - above, above }
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleSummary {
    pub n_runs: u64,
    pub seed: u64,
    pub delta: f64,
    pub branch_frequencies: BranchFrequencies,
}

/// `run,qbar,weight` rows.
pub fn write_ensemble_csv<W: Write>(runs: &[EnsembleRun], mut w: W) -> Result<()> {
    let mut buf = String::from("run,qbar,weight\n");
    for r in runs {
        buf.push_str(&format!("{},{},{}\n", r.run, fmt_f64(r.qbar), fmt_f64(r.weight)));
    }
    w.write_all(buf.as_bytes())?;
    Ok(())
}
