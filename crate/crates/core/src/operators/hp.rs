use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I};

use super::spin::{build_spin_operators, OperatorLabel, OperatorMatrix, SpinBasis};

/// Diagonal Taylor polynomial `M_κ(n) ≈ √(2j − n)` and its inverse.
#[derive(Debug, Clone)]
pub struct HpTaylor {
    pub kappa: usize,
    pub mkappa: OperatorMatrix,
    pub mkappa_inv: OperatorMatrix,
}

impl HpTaylor {
    pub fn diagonal(&self) -> Vec<f64> {
        self.mkappa.matrix.diagonal().iter().map(|z| z.re).collect()
    }
}

/// Coefficients `c_k` of `√(2j − n) = Σ_k c_k n^k`, `k = 0..=kappa`.
pub fn taylor_coefficients(two_j: f64, kappa: usize) -> Vec<f64> {
    // √(2j)·binom(1/2, k)·(−1/(2j))^k, built by the binomial recurrence.
    let mut coeffs = Vec::with_capacity(kappa + 1);
    let mut binom = 1.0;
    let mut scale = two_j.sqrt();
    for k in 0..=kappa {
        coeffs.push(scale * binom);
        binom *= (0.5 - k as f64) / (k as f64 + 1.0);
        scale *= -1.0 / two_j;
    }
    coeffs
}

/// Horner evaluation of the truncated series at each level.
pub(crate) fn taylor_values(two_j: f64, kappa: usize, levels: &[f64]) -> Vec<f64> {
    let coeffs = taylor_coefficients(two_j, kappa);
    levels
        .iter()
        .map(|&n| coeffs.iter().rev().fold(0.0, |acc, &ck| acc * n + ck))
        .collect()
}

fn check_levels(values: &[f64]) -> Result<()> {
    match values.iter().position(|&v| !(v > 0.0)) {
        Some(level) => Err(Error::NonInvertible {
            level,
            value: values[level],
        }),
        None => Ok(()),
    }
}

pub fn hp_taylor(basis: SpinBasis, kappa: usize) -> Result<HpTaylor> {
    if kappa == 0 {
        return Err(Error::invalid("kappa", "Taylor order must be at least 1"));
    }
    let levels: Vec<f64> = (0..basis.dim()).map(|n| n as f64).collect();
    let values = taylor_values(basis.two_j() as f64, kappa, &levels);
    check_levels(&values)?;
    let n = basis.dim();
    let m = CMatrix::from_fn(n, n, |r, col| if r == col { c(values[r]) } else { c(0.0) });
    let minv = CMatrix::from_fn(n, n, |r, col| {
        if r == col {
            c(1.0 / values[r])
        } else {
            c(0.0)
        }
    });
    Ok(HpTaylor {
        kappa,
        mkappa: OperatorMatrix::new(OperatorLabel::Mkappa, m),
        mkappa_inv: OperatorMatrix::new(OperatorLabel::MkappaInv, minv),
    })
}

/// HP bosonic operators `b ≈ M⁻¹J₊`, `b† ≈ J₋M⁻¹`.
#[derive(Debug, Clone)]
pub struct HpLadder {
    pub b: CMatrix,
    pub bdag: CMatrix,
}

pub fn hp_ladder(basis: SpinBasis, kappa: usize) -> Result<HpLadder> {
    let taylor = hp_taylor(basis, kappa)?;
    let ops = build_spin_operators(basis);
    let minv = &taylor.mkappa_inv.matrix;
    Ok(HpLadder {
        b: minv * &ops.jplus.matrix,
        bdag: &ops.jminus.matrix * minv,
    })
}

/// Position- and momentum-like quadratures `J_x'`, `J_y'`.
#[derive(Debug, Clone)]
pub struct Quadratures {
    pub jxprime: OperatorMatrix,
    pub jyprime: OperatorMatrix,
}

pub fn quadrature_operators(basis: SpinBasis, kappa: usize) -> Result<Quadratures> {
    let HpLadder { b, bdag } = hp_ladder(basis, kappa)?;
    let s = c(std::f64::consts::FRAC_1_SQRT_2);
    let x = (&bdag + &b) * s;
    let p = (&bdag - &b) * (I * s);
    Ok(Quadratures {
        jxprime: OperatorMatrix::new(OperatorLabel::Jxprime, x),
        jyprime: OperatorMatrix::new(OperatorLabel::Jyprime, p),
    })
}
