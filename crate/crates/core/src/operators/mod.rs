//! Spin algebra, the Holstein–Primakoff quadratures, Hamiltonians and
//! dissipators.

mod dissipators;
mod hamiltonian;
mod hp;
mod spin;

pub use dissipators::{
    apply_localization_dissipator, apply_thermal_dissipator, lindblad_term,
    localization_stiffness, DissipatorParams, LadderOrientation, LocalizationOperator,
    ThermalLadder,
};
pub use hamiltonian::{
    build_hamiltonian, protocol_alpha, scalar_potential, DoubleWellHamiltonian,
    HamiltonianProvider, PotentialParams, StaticHamiltonian,
};
pub use hp::{
    hp_ladder, hp_taylor, quadrature_operators, taylor_coefficients, HpLadder, HpTaylor,
    Quadratures,
};
pub use spin::{build_spin_operators, OperatorLabel, OperatorMatrix, SpinBasis, SpinOperators};
