//! Scalar diagnostics of density matrices and the continuous reference spectrum.

mod continuum;
mod measures;

pub use continuum::{continuous_eigs, ContinuousGrid, MAX_LEVELS, MIN_POINTS};
pub use measures::{
    eigenprojector, fidelity, l1_coherence, l1_coherence_in, mean_energy, mixed_state,
    populations, populations_in, von_neumann_entropy,
};
