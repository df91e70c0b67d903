use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};
use crate::operators::SpinBasis;

fn sqrt_binomials(two_j: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(two_j + 1);
    let mut b = 1.0_f64;
    for k in 0..=two_j {
        out.push(b.sqrt());
        b *= (two_j - k) as f64 / (k + 1) as f64;
    }
    out
}

/// Real amplitudes `√C(2j,k) cos^{2j−k}(θ/2) sin^k(θ/2)` and their θ-derivatives,
/// index `k = j − m`.
pub(crate) fn amplitudes(two_j: usize, theta: f64, sqrt_binom: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = (0.5 * theta).sin_cos();
    let pow = |x: f64, e: i64| if e < 0 { 0.0 } else { x.powi(e as i32) };
    let tj = two_j as i64;
    let mut a = Vec::with_capacity(two_j + 1);
    let mut da = Vec::with_capacity(two_j + 1);
    for (k, &sb) in sqrt_binom.iter().enumerate() {
        let k = k as i64;
        a.push(sb * pow(c, tj - k) * pow(s, k));
        let up = if k > 0 { k as f64 * pow(c, tj - k + 1) * pow(s, k - 1) } else { 0.0 };
        let down = if k < tj {
            (tj - k) as f64 * pow(c, tj - k - 1) * pow(s, k + 1)
        } else {
            0.0
        };
        da.push(0.5 * sb * (up - down));
    }
    (a, da)
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::AngleOutOfRange { theta, phi });
    }
    Ok(())
}

/// `|Ω⟩ = e^{−iφJz} e^{−iθJy} |j,j⟩` in the basis ordered `m = j … −j`.
pub fn coherent_state(basis: SpinBasis, theta: f64, phi: f64) -> Result<CVector> {
    check_angles(theta, phi)?;
    Ok(coherent_state_unchecked(basis, theta, phi))
}

/// Same as [`coherent_state`] without the angle-range check; used for
/// finite-difference stencils that step slightly past the grid.
pub(crate) fn coherent_state_unchecked(basis: SpinBasis, theta: f64, phi: f64) -> CVector {
    let two_j = basis.two_j();
    let sb = sqrt_binomials(two_j);
    let (a, _) = amplitudes(two_j, theta, &sb);
    CVector::from_fn(basis.dim(), |k, _| {
        C64::from_polar(a[k], -basis.m(k) * phi)
    })
}

/// Amplitudes of every θ node of a grid, shared by all field evaluations.
#[derive(Debug, Clone)]
pub struct AmplitudeTable {
    pub(crate) amps: Vec<Vec<f64>>,
    pub(crate) damps: Vec<Vec<f64>>,
}

impl AmplitudeTable {
    pub fn new(basis: SpinBasis, thetas: &[f64]) -> Self {
        let two_j = basis.two_j();
        let sb = sqrt_binomials(two_j);
        let (amps, damps) = thetas.iter().map(|&t| amplitudes(two_j, t, &sb)).unzip();
        AmplitudeTable { amps, damps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CMatrix, HermitianEigen, I};
    use crate::operators::build_spin_operators;

    #[test]
    fn north_pole_is_top_state() {
        let b = SpinBasis::new(6).unwrap();
        let v = coherent_state(b, 0.0, 0.0).unwrap();
        assert_eq!(v[0], c(1.0));
        assert!(v.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn unit_norm() {
        for dim in 2..=25 {
            let b = SpinBasis::new(dim).unwrap();
            for (t, p) in [(0.3, 0.1), (1.7, 4.0), (3.0, 6.0)] {
                let v = coherent_state(b, t, p).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn matches_rotation_exponentials() {
        let b = SpinBasis::new(25).unwrap();
        let ops = build_spin_operators(b);
        let (theta, phi) = (1.1, 2.3);
        let rot = |op: &CMatrix, angle: f64| {
            HermitianEigen::new(op).map_complex(|v| (-I * angle * v).exp())
        };
        let mut top = CVector::zeros(25);
        top[0] = c(1.0);
        let oracle = rot(&ops.jz.matrix, phi) * rot(&ops.jy.matrix, theta) * top;
        let v = coherent_state(b, theta, phi).unwrap();
        assert!((v - oracle).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let sb = sqrt_binomials(7);
        let (_, da) = amplitudes(7, 0.9, &sb);
        let h = 1e-6;
        let (ap, _) = amplitudes(7, 0.9 + h, &sb);
        let (am, _) = amplitudes(7, 0.9 - h, &sb);
        for k in 0..8 {
            assert!(((ap[k] - am[k]) / (2.0 * h) - da[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let b = SpinBasis::new(3).unwrap();
        assert!(coherent_state(b, -0.1, 0.0).is_err());
        assert!(coherent_state(b, 0.1, 2.0 * PI).is_err());
    }
}
