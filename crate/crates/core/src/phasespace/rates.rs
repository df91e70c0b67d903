use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::Lindbladian;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::operators::{
    build_spin_operators, DissipatorParams, LadderOrientation, LocalizationOperator,
};

use super::fields::{HusimiField, PhaseSpace};
use super::grid::SphereGrid;

/// Floor for `Q` in the `1/Q` factors of the production integrals.
pub const Q_FLOOR: f64 = 1e-12;
/// Floor for `Q` inside `ln Q`.
pub const LOG_FLOOR: f64 = 1e-300;

/// Wehrl-entropy rates at one instant, units of ω.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EntropyRates {
    pub ds_u: f64,
    pub ds_th: f64,
    pub ds_lc: f64,
    pub pi_th: f64,
    pub phi_th: f64,
    pub pi_lc: f64,
}

impl EntropyRates {
    pub fn total(&self) -> f64 {
        self.ds_u + self.ds_th + self.ds_lc
    }

    pub fn max_rate(&self) -> f64 {
        self.pi_th.abs().max(self.pi_lc.abs()).max(self.phi_th.abs())
    }
}

/// `Π^th + Π^lc − Φ^th`, zero at a steady state.
pub fn stationarity_residual(rates: &EntropyRates) -> f64 {
    rates.pi_th + rates.pi_lc - rates.phi_th
}

/// The thermal formulas are written for `J₋` lowering the energy. With `J₊`
/// lowering they hold for the field reflected through the x axis.
fn oriented(q: &HusimiField, diss: &DissipatorParams, grid: &SphereGrid) -> Option<HusimiField> {
    match diss.ladder {
        LadderOrientation::SpinLowering => None,
        LadderOrientation::OscillatorLowering => Some(q.reflected(grid)),
    }
}

fn spin_j(q: &HusimiField) -> f64 {
    (q.dim as f64 - 1.0) / 2.0
}

/// Thermal entropy flux `Φ^th`.
pub fn flux_thermal(q: &HusimiField, diss: &DissipatorParams, grid: &SphereGrid) -> f64 {
    if diss.gamma == 0.0 {
        return 0.0;
    }
    let reflected = oriented(q, diss, grid);
    let q = reflected.as_ref().unwrap_or(q);
    let j = spin_j(q);
    let a = 2.0 * diss.nbar() + 1.0;
    let np = grid.n_phi();
    let integrand: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let i = idx / np;
            let (c, s) = (grid.cos_theta()[i], grid.theta()[i].sin());
            s * (2.0 * j * q.values[idx] * s / (a - c) - q.d_theta[idx])
        })
        .collect();
    diss.gamma * j * (2.0 * j + 1.0) / (4.0 * PI) * grid.integrate(&integrand)
}

/// Thermal entropy production `Π^th`.
pub fn production_thermal(q: &HusimiField, diss: &DissipatorParams, grid: &SphereGrid) -> f64 {
    if diss.gamma == 0.0 {
        return 0.0;
    }
    let reflected = oriented(q, diss, grid);
    let q = reflected.as_ref().unwrap_or(q);
    let j = spin_j(q);
    let a = 2.0 * diss.nbar() + 1.0;
    let np = grid.n_phi();
    let integrand: Vec<f64> = (0..grid.len())
        .map(|idx| {
            let i = idx / np;
            let (c, s) = (grid.cos_theta()[i], grid.theta()[i].sin());
            let qv = q.values[idx];
            let dz2 = q.d_phi[idx] * q.d_phi[idx];
            let azimuthal = dz2 * (a * c - 1.0) * c / (s * s);
            let polar = (2.0 * j * qv * s + (c - a) * q.d_theta[idx]).powi(2) / (a - c);
            (azimuthal + polar) / qv.max(Q_FLOOR)
        })
        .collect();
    diss.gamma * (2.0 * j + 1.0) / (8.0 * PI) * grid.integrate(&integrand)
}

/// Localization entropy production `Π^lc = Λ N/(4π) ∮ |𝒥x(Q)|²/Q dΩ`, with
/// `𝒥x(Q) = ⟨Ω|[Jx, ρ]|Ω⟩`. Only the bare `Jx` has this phase-space form.
pub fn production_localization(
    rho: &CMatrix,
    q: &HusimiField,
    diss: &DissipatorParams,
    ps: &PhaseSpace,
) -> Result<f64> {
    if diss.localization == LocalizationOperator::Jxprime {
        return Err(Error::UnsupportedOperator("Jxprime".into()));
    }
    if diss.lambda == 0.0 {
        return Ok(0.0);
    }
    let ops = build_spin_operators(ps.basis());
    let field = ps.commutator_field(rho, &ops.jx)?;
    let integrand: Vec<f64> = field
        .values
        .iter()
        .zip(&q.values)
        .map(|(f, &qv)| f.norm_sqr() / qv.max(Q_FLOOR))
        .collect();
    Ok(diss.lambda * q.dim as f64 / (4.0 * PI) * ps.grid().integrate(&integrand))
}

/// `−(N/4π) ∮ ⟨Ω|T|Ω⟩ ln Q dΩ` for one generator term `T`.
pub fn entropy_rate_of(term: &CMatrix, q: &HusimiField, ps: &PhaseSpace) -> Result<f64> {
    let field = ps.expectation(term)?;
    let integrand: Vec<f64> = field
        .iter()
        .zip(&q.values)
        .map(|(f, &qv)| f * qv.max(LOG_FLOOR).ln())
        .collect();
    Ok(-(q.dim as f64) / (4.0 * PI) * ps.grid().integrate(&integrand))
}

/// Splits `dS_Q/dt` into unitary, thermal and localization parts and fills in
/// the production/flux terms. With the `Jx'` localization operator there is
/// no closed production integral and `Π^lc` is set to `dS_lc`, which is its
/// value whenever the localization part has no flux.
pub fn rate_decomposition(
    rho: &CMatrix,
    t: f64,
    lindbladian: &Lindbladian,
    ps: &PhaseSpace,
) -> Result<EntropyRates> {
    let q = ps.husimi(rho)?;
    rate_decomposition_with(rho, &q, t, lindbladian, ps)
}

pub fn rate_decomposition_with(
    rho: &CMatrix,
    q: &HusimiField,
    t: f64,
    lindbladian: &Lindbladian,
    ps: &PhaseSpace,
) -> Result<EntropyRates> {
    let diss = lindbladian.params();
    let ds_u = entropy_rate_of(&lindbladian.unitary(rho, t)?, q, ps)?;
    let ds_th = if diss.gamma == 0.0 {
        0.0
    } else {
        entropy_rate_of(&lindbladian.thermal(rho)?, q, ps)?
    };
    let ds_lc = if diss.lambda == 0.0 {
        0.0
    } else {
        entropy_rate_of(&lindbladian.localization(rho)?, q, ps)?
    };
    let pi_lc = match production_localization(rho, q, diss, ps) {
        Ok(v) => v,
        Err(Error::UnsupportedOperator(_)) => ds_lc,
        Err(e) => return Err(e),
    };
    Ok(EntropyRates {
        ds_u,
        ds_th,
        ds_lc,
        pi_th: production_thermal(q, diss, ps.grid()),
        phi_th: flux_thermal(q, diss, ps.grid()),
        pi_lc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::thermal_state;
    use crate::test_support::random_state;
    use crate::operators::{SpinBasis, StaticHamiltonian, ThermalLadder};

    fn spin_setup(gamma: f64, lambda: f64, ladder: LadderOrientation) -> (Lindbladian, PhaseSpace) {
        let basis = SpinBasis::new(4).unwrap();
        let ops = build_spin_operators(basis);
        let h = match ladder {
            LadderOrientation::SpinLowering => ops.jz.matrix.clone(),
            LadderOrientation::OscillatorLowering => -ops.jz.matrix.clone(),
        };
        let params = DissipatorParams {
            gamma,
            lambda,
            beta_bath: 1.0,
            localization: LocalizationOperator::BareJx,
            ladder,
        };
        let l = Lindbladian::new(
            Box::new(StaticHamiltonian::new(h)),
            params,
            ThermalLadder::new(&ops, ladder),
            ops.jx.matrix.clone(),
        )
        .unwrap();
        (l, PhaseSpace::new(basis, SphereGrid::default()))
    }

    #[test]
    fn stationary_state_has_zero_rates() {
        let (l, ps) = spin_setup(0.0, 0.0, LadderOrientation::SpinLowering);
        let rho = thermal_state(&l.hamiltonian_at(0.0).unwrap(), 0.8);
        let r = rate_decomposition(rho.matrix(), 0.0, &l, &ps).unwrap();
        assert!(r.ds_u.abs() < 1e-12 && r.ds_th == 0.0 && r.ds_lc == 0.0);
    }

    #[test]
    fn gibbs_fixed_point_rates_vanish() {
        for ladder in [LadderOrientation::SpinLowering, LadderOrientation::OscillatorLowering] {
            let (l, ps) = spin_setup(0.5, 0.0, ladder);
            let rho = thermal_state(&l.hamiltonian_at(0.0).unwrap(), 1.0);
            let r = rate_decomposition(rho.matrix(), 0.0, &l, &ps).unwrap();
            assert!(r.ds_th.abs() < 1e-6, "{ladder:?} {}", r.ds_th);
            assert!(r.phi_th.abs() < 1e-5, "{ladder:?} {}", r.phi_th);
            assert!(r.pi_th.abs() < 1e-5, "{ladder:?} {}", r.pi_th);
        }
    }

    #[test]
    fn thermal_split_reproduces_rate() {
        for ladder in [LadderOrientation::SpinLowering, LadderOrientation::OscillatorLowering] {
            let (l, ps) = spin_setup(0.5, 0.5, ladder);
            for seed in 0..3 {
                let rho = random_state(4, seed);
                let r = rate_decomposition(&rho, 0.0, &l, &ps).unwrap();
                let split = r.pi_th - r.phi_th;
                assert!((split - r.ds_th).abs() < 1e-4 * r.ds_th.abs().max(1e-3), "{ladder:?}");
                assert!((r.pi_lc - r.ds_lc).abs() < 1e-4 * r.ds_lc.abs().max(1e-3));
                assert!(r.pi_th >= -1e-6 && r.pi_lc >= -1e-6);
            }
        }
    }

    #[test]
    fn heating_cold_spin_raises_entropy() {
        let (l, ps) = spin_setup(0.5, 0.0, LadderOrientation::SpinLowering);
        let rho = thermal_state(&l.hamiltonian_at(0.0).unwrap(), 2.0);
        let r = rate_decomposition(rho.matrix(), 0.0, &l, &ps).unwrap();
        assert!(r.ds_th > 0.0);
        assert!(r.phi_th < 0.0);
    }

    #[test]
    fn switched_off_terms_are_zero() {
        let (l, ps) = spin_setup(0.0, 0.0, LadderOrientation::SpinLowering);
        let q = ps.husimi(&random_state(4, 1)).unwrap();
        let p = *l.params();
        assert_eq!(flux_thermal(&q, &p, ps.grid()), 0.0);
        assert_eq!(production_thermal(&q, &p, ps.grid()), 0.0);
        let mixed = CMatrix::identity(4, 4) / crate::linalg::c(4.0);
        let qm = ps.husimi(&mixed).unwrap();
        let p_on = DissipatorParams { lambda: 0.5, ..p };
        assert!(production_localization(&mixed, &qm, &p_on, &ps).unwrap().abs() < 1e-14);
    }

    #[test]
    fn primed_localization_has_no_closed_form() {
        let (l, ps) = spin_setup(0.0, 0.5, LadderOrientation::SpinLowering);
        let rho = random_state(4, 2);
        let q = ps.husimi(&rho).unwrap();
        let p = DissipatorParams {
            localization: LocalizationOperator::Jxprime,
            ..*l.params()
        };
        assert!(matches!(
            production_localization(&rho, &q, &p, &ps),
            Err(Error::UnsupportedOperator(_))
        ));
    }

    #[test]
    fn residual_of_zero_rates() {
        assert_eq!(stationarity_residual(&EntropyRates::default()), 0.0);
    }
}
