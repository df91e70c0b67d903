//! Spin coherent states, Husimi functions on a sphere quadrature, the Wehrl
//! entropy and its rate decomposition.

mod coherent;
mod fields;
mod grid;
mod rates;

pub use coherent::{coherent_state, AmplitudeTable};
pub use fields::{
    differential_commutator_field, husimi, phase_space_commutator, wehrl_entropy, ComplexField,
    HusimiField, PhaseSpace, NEGATIVE_Q_TOL,
};
pub use grid::{gauss_legendre, SphereGrid, MIN_NODES};
pub use rates::{
    entropy_rate_of, flux_thermal, production_localization, production_thermal,
    rate_decomposition, rate_decomposition_with, stationarity_residual, EntropyRates, LOG_FLOOR,
    Q_FLOOR,
};
