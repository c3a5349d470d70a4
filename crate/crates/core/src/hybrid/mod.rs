//! Hybrid states over a classical phase space with a finite quantum sector,
//! and their dynamics.

mod counterexample;
mod evolve;
mod flow;
mod generator;
mod hamiltonian;
mod state;

pub use counterexample::{
    scan_naive_counterexamples, NaiveCounterexample, PINNED_COUNTEREXAMPLE, SCAN_LAMBDAS, SCAN_VARIANCES,
    VIOLATION_THRESHOLD,
};
pub use evolve::{step, Evolution, PositivityTrace, TraceRow};
pub use flow::{continuity_divergence, mean_field_flow, FlowField};
pub use generator::{corrected_generator, naive_generator, GeneratorKind};
pub use hamiltonian::{HybridHamiltonian, PreparedHamiltonian};
pub use state::{
    check_density_matrix, classical_marginal, conditional_state, conditional_state_with, positivity_report,
    product_state, quantum_marginal, ClassicalDistribution, HybridState, PositivityReport, CONDITIONING_THRESHOLD,
    NORMALIZATION_TOL, POSITIVITY_TOL,
};
