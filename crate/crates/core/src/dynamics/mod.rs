//! Density matrices, the master-equation generator and its RK4 propagator,
//! and initial-state preparation.

mod integrator;
mod lindblad;
mod prepare;
mod state;

pub use integrator::{
    propagate, stable_substeps, IntegratorConfig, SampleObservables, TrajectoryRecord,
    POSITIVITY_ABORT,
};
pub use lindblad::{lindblad_rhs, Lindbladian};
pub use prepare::{squeeze_operator, squeeze_state, thermal_state};
pub use state::{DensityMatrix, HERMITIAN_TOL, POSITIVITY_TOL, TRACE_TOL};
