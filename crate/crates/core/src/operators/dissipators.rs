use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen};

use super::spin::SpinOperators;

/// Operator entering the double commutator of the localization dissipator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalizationOperator {
    BareJx,
    Jxprime,
}

/// Which spin ladder operator removes energy.
///
/// For `H = ωJz` energy falls with `J₋`. In the oscillator picture the HP
/// occupation `n = j − m` makes `J₊ ∝ b` the lowering operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderOrientation {
    SpinLowering,
    OscillatorLowering,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipatorParams {
    pub gamma: f64,
    pub lambda: f64,
    pub beta_bath: f64,
    pub localization: LocalizationOperator,
    pub ladder: LadderOrientation,
}

impl Default for DissipatorParams {
    fn default() -> Self {
        DissipatorParams {
            gamma: 0.0,
            lambda: 0.0,
            beta_bath: 1.0,
            localization: LocalizationOperator::BareJx,
            ladder: LadderOrientation::OscillatorLowering,
        }
    }
}

impl DissipatorParams {
    /// Bose occupation `1/(e^{β_B} − 1)` at the unit level spacing.
    pub fn nbar(&self) -> f64 {
        1.0 / self.beta_bath.exp_m1()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid("gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("Lambda", format!("must be >= 0, got {}", self.lambda)));
        }
        if !(self.beta_bath > 0.0 && self.beta_bath.is_finite()) {
            return Err(Error::invalid(
                "beta_bath",
                format!("must be > 0, got {}", self.beta_bath),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ThermalLadder {
    pub lowering: CMatrix,
    pub raising: CMatrix,
}

impl ThermalLadder {
    pub fn new(ops: &SpinOperators, orientation: LadderOrientation) -> Self {
        let (lowering, raising) = match orientation {
            LadderOrientation::SpinLowering => (&ops.jminus, &ops.jplus),
            LadderOrientation::OscillatorLowering => (&ops.jplus, &ops.jminus),
        };
        ThermalLadder {
            lowering: lowering.matrix.clone(),
            raising: raising.matrix.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lowering.nrows()
    }
}

fn check_dims(rho: &CMatrix, n: usize) -> Result<()> {
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// `O ρ O† − {O†O, ρ}/2`
pub fn lindblad_term(o: &CMatrix, rho: &CMatrix) -> CMatrix {
    let od = o.adjoint();
    let odo = &od * o;
    o * rho * &od - (&odo * rho + rho * &odo) * c(0.5)
}

pub fn apply_thermal_dissipator(
    rho: &CMatrix,
    p: &DissipatorParams,
    ladder: &ThermalLadder,
) -> Result<CMatrix> {
    check_dims(rho, ladder.dim())?;
    if p.gamma == 0.0 {
        return Ok(CMatrix::zeros(rho.nrows(), rho.ncols()));
    }
    let nbar = p.nbar();
    Ok((lindblad_term(&ladder.lowering, rho) * c(nbar + 1.0)
        + lindblad_term(&ladder.raising, rho) * c(nbar))
        * c(p.gamma))
}

/// `−Λ[A, [A, ρ]]`
pub fn apply_localization_dissipator(
    rho: &CMatrix,
    p: &DissipatorParams,
    loc_op: &CMatrix,
) -> Result<CMatrix> {
    check_dims(rho, loc_op.nrows())?;
    let inner = loc_op * rho - rho * loc_op;
    let outer = loc_op * &inner - &inner * loc_op;
    Ok(outer * c(-p.lambda))
}

/// Largest decay rate of `ρ ↦ −Λ[A,[A,ρ]]`, i.e. `Λ·(a_max − a_min)²`.
pub fn localization_stiffness(lambda: f64, loc_op: &CMatrix) -> f64 {
    let eig = HermitianEigen::new(loc_op);
    lambda * (eig.max() - eig.min()).powi(2)
}
