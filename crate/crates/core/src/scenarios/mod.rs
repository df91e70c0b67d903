//! Drivers for each study: configuration, runners, sweeps and NESS detection.

mod analysis;
mod config;
mod exp;
mod runs;

pub use analysis::{RATE_FLOOR, detect_ness, is_bimodal, is_unimodal, local_maxima, NessReport, PEAK_FLOOR};
pub use config::{linspace_step, logspace, ScenarioConfig, ScenarioKind, CAL_E_CAP};
pub use exp::{compute_exp_params, ExpParams, ExpResults, ATOMIC_MASS, BOLTZMANN, HBAR};
pub use runs::{
    run_coupling_sweep, run_doublewell, run_eigen_compare, run_lambda_sweep, run_low_coupling,
    run_scenario, run_spin_study, run_squeeze_sweep, EigenComparison, Run, ScenarioOutput,
    SweepRow, SweepTable, System, NESS_CAP_TAUS,
};
