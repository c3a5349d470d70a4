//! Indirect position measurement through a Gaussian ancilla, and its net
//! effect on the system: the Gaussian hitting process.

mod chain;
mod hit;
mod wave;

pub use chain::{ancilla_state, entangle, project_pointer, ZERO_PROBABILITY};
pub use hit::{
    branch_frequencies, hit, outcome_pdf, repeated_hits, sample_ensemble, sample_outcome, write_ensemble_csv,
    BranchFrequencies, EnsembleRun, EnsembleSummary, HitParams, OutcomePdf, OutcomeSample, OutcomeSampler,
    OUTCOME_MARGIN,
};
pub use wave::{CompositeWaveFunction, LineGrid, WaveFunction};
