use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen};

use super::hp::quadrature_operators;
use super::spin::{OperatorLabel, OperatorMatrix, SpinBasis};

/// Shape of the time-dependent potential, natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Depth ℰ in units of ħω.
    pub cal_e: f64,
    /// Gaussian width W.
    pub w: f64,
    /// Protocol duration τ in units of 1/ω.
    pub tau: f64,
    pub mass: f64,
    pub omega: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        PotentialParams {
            cal_e: 10.0,
            w: 1.0,
            tau: 10.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

impl PotentialParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("calE", self.cal_e),
            ("W", self.w),
            ("tau", self.tau),
            ("mass", self.mass),
            ("omega", self.omega),
        ];
        for (name, v) in checks {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Additional potential `−ℰ(α + ᾱ x²/2W²) e^{−x²/2W²}` at a scalar position.
    pub fn additional(&self, x: f64, alpha: f64) -> f64 {
        let u = x * x / (2.0 * self.w * self.w);
        -self.cal_e * (alpha + (1.0 - alpha) * u) * (-u).exp()
    }
}

/// Linear switch `α(t) = 1 − t/τ`, held at 0 after the protocol ends.
/// Returns `(α, ᾱ)` with `ᾱ = 1 − α`.
pub fn protocol_alpha(t: f64, tau: f64) -> Result<(f64, f64)> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let alpha = if t >= tau { 0.0 } else { 1.0 - t / tau };
    Ok((alpha, 1.0 - alpha))
}

/// Full scalar potential `mω²x²/2 + H_add(x, t)`.
pub fn scalar_potential(params: &PotentialParams, x: f64, t: f64) -> Result<f64> {
    let (alpha, _) = protocol_alpha(t, params.tau)?;
    Ok(0.5 * params.mass * params.omega * params.omega * x * x + params.additional(x, alpha))
}

/// Source of `H(t)` for the propagator.
pub trait HamiltonianProvider: Send + Sync {
    fn dim(&self) -> usize;
    fn hamiltonian(&self, t: f64) -> Result<CMatrix>;
    /// Upper bound on the spread of the spectrum of `H(t)` over all `t`.
    fn spectral_spread(&self) -> f64;
}

/// Time-independent Hamiltonian.
#[derive(Debug, Clone)]
pub struct StaticHamiltonian {
    h: CMatrix,
    spread: f64,
}

impl StaticHamiltonian {
    pub fn new(h: CMatrix) -> Self {
        let eig = HermitianEigen::new(&h);
        StaticHamiltonian {
            spread: eig.max() - eig.min(),
            h,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.h
    }
}

impl HamiltonianProvider for StaticHamiltonian {
    fn dim(&self) -> usize {
        self.h.nrows()
    }

    fn hamiltonian(&self, t: f64) -> Result<CMatrix> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(self.h.clone())
    }

    fn spectral_spread(&self) -> f64 {
        self.spread
    }
}

/// `H(t) = H₀ + α(t)·A + ᾱ(t)·B` with the Gaussian pieces precomputed.
#[derive(Debug, Clone)]
pub struct DoubleWellHamiltonian {
    pub params: PotentialParams,
    pub basis: SpinBasis,
    pub kappa: usize,
    h0: CMatrix,
    a: CMatrix,
    b: CMatrix,
    jxprime: OperatorMatrix,
    spread: f64,
}

impl DoubleWellHamiltonian {
    pub fn new(basis: SpinBasis, kappa: usize, params: PotentialParams) -> Result<Self> {
        params.validate()?;
        let q = quadrature_operators(basis, kappa)?;
        let x = &q.jxprime.matrix;
        let p = &q.jyprime.matrix;
        let h0 = p * p * c(0.5 / params.mass)
            + x * x * c(0.5 * params.mass * params.omega * params.omega);
        let eig = HermitianEigen::new(x);
        let w2 = 2.0 * params.w * params.w;
        let a = eig.map(|v| -params.cal_e * (-v * v / w2).exp());
        let b = eig.map(|v| -params.cal_e * (v * v / w2) * (-v * v / w2).exp());
        // The spectrum spread is bounded by those of the endpoints plus ℰ.
        let h0_eig = HermitianEigen::new(&h0);
        let spread = h0_eig.max() - h0_eig.min() + params.cal_e;
        Ok(DoubleWellHamiltonian {
            params,
            basis,
            kappa,
            h0,
            a,
            b,
            jxprime: q.jxprime,
            spread,
        })
    }

    pub fn h0(&self) -> &CMatrix {
        &self.h0
    }

    pub fn jxprime(&self) -> &OperatorMatrix {
        &self.jxprime
    }

    pub fn at(&self, t: f64) -> Result<OperatorMatrix> {
        Ok(OperatorMatrix::new(
            OperatorLabel::Hamiltonian,
            self.hamiltonian(t)?,
        ))
    }
}

impl HamiltonianProvider for DoubleWellHamiltonian {
    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn hamiltonian(&self, t: f64) -> Result<CMatrix> {
        let (alpha, alphabar) = protocol_alpha(t, self.params.tau)?;
        let mut h = self.h0.clone();
        h.zip_zip_apply(&self.a, &self.b, |hv, av, bv| {
            *hv += av * alpha + bv * alphabar;
        });
        Ok(h)
    }

    fn spectral_spread(&self) -> f64 {
        self.spread
    }
}

pub fn build_hamiltonian(
    basis: SpinBasis,
    kappa: usize,
    params: PotentialParams,
    t: f64,
) -> Result<OperatorMatrix> {
    protocol_alpha(t, params.tau)?;
    DoubleWellHamiltonian::new(basis, kappa, params)?.at(t)
}
