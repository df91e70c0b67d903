use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen, I};
use crate::operators::{hp_ladder, SpinBasis};

use super::state::DensityMatrix;

/// `e^{−βH}/Z`, with weights shifted by the ground energy to avoid overflow.
pub fn thermal_state(h: &CMatrix, beta: f64) -> DensityMatrix {
    let eig = HermitianEigen::new(h);
    let e0 = eig.min();
    let z: f64 = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
    let rho = eig.map_complex(|e| c((-beta * (e - e0)).exp() / z));
    let tr = rho.trace();
    DensityMatrix::unchecked(rho / tr, 0.0)
}

/// Unitary `S(ζ) = exp((ζ b² − ζ b†²)/2)` for real ζ, in the HP-truncated space.
/// Negative ζ squeezes the momentum quadrature.
pub fn squeeze_operator(zeta: f64, basis: SpinBasis, kappa: usize) -> Result<CMatrix> {
    let ladder = hp_ladder(basis, kappa)?;
    let b2 = &ladder.b * &ladder.b;
    let bd2 = &ladder.bdag * &ladder.bdag;
    // G = (ζb² − ζb†²)/2 is anti-Hermitian; K = iG is Hermitian and S = e^{−iK}.
    let g = (b2 - bd2) * c(0.5 * zeta);
    let k = &g * I;
    let eig = HermitianEigen::new(&k);
    Ok(eig.map_complex(|lambda| (-I * lambda).exp()))
}

pub fn squeeze_state(
    rho: &DensityMatrix,
    zeta: f64,
    basis: SpinBasis,
    kappa: usize,
) -> Result<DensityMatrix> {
    if !(zeta.abs() <= 1.0) {
        return Err(Error::invalid("zeta", format!("|zeta| must be <= 1, got {zeta}")));
    }
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.dim(),
        });
    }
    if zeta == 0.0 {
        return Ok(rho.clone());
    }
    let s = squeeze_operator(zeta, basis, kappa)?;
    let out = &s * rho.matrix() * s.adjoint();
    Ok(DensityMatrix::unchecked(out, rho.time()))
}
