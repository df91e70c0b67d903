use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, I};
use crate::operators::{OperatorLabel, OperatorMatrix, SpinBasis};

use super::coherent::{coherent_state_unchecked, AmplitudeTable};
use super::grid::SphereGrid;

/// Values below this are reported as a broken state rather than clamped.
pub const NEGATIVE_Q_TOL: f64 = -1e-9;

#[cfg(feature = "parallel")]
fn map_rows<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_rows<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Complex field on a sphere grid, row-major with θ outer.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub values: Vec<C64>,
    pub n_theta: usize,
    pub n_phi: usize,
}

impl ComplexField {
    pub fn at(&self, i: usize, l: usize) -> C64 {
        self.values[i * self.n_phi + l]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &ComplexField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// Husimi function `Q(θ, φ) = ⟨Ω|ρ|Ω⟩` with its analytic angular derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct HusimiField {
    pub values: Vec<f64>,
    pub d_theta: Vec<f64>,
    pub d_phi: Vec<f64>,
    pub n_theta: usize,
    pub n_phi: usize,
    /// Hilbert-space dimension `N = 2j + 1`.
    pub dim: usize,
}

impl HusimiField {
    pub fn at(&self, i: usize, l: usize) -> f64 {
        self.values[i * self.n_phi + l]
    }

    /// `(N/4π) ∮ Q dΩ`, which is 1 for a normalized state.
    pub fn normalization(&self, grid: &SphereGrid) -> f64 {
        self.dim as f64 / (4.0 * std::f64::consts::PI) * grid.integrate(&self.values)
    }

    /// The field `Q'(θ, φ) = Q(π − θ, −φ)`, i.e. the state rotated by π about x.
    pub fn reflected(&self, grid: &SphereGrid) -> HusimiField {
        let n = self.values.len();
        let mut out = HusimiField {
            values: vec![0.0; n],
            d_theta: vec![0.0; n],
            d_phi: vec![0.0; n],
            ..*self
        };
        for i in 0..self.n_theta {
            for l in 0..self.n_phi {
                let dst = grid.index(i, l);
                let src = grid.reflected_index(i, l);
                out.values[dst] = self.values[src];
                out.d_theta[dst] = -self.d_theta[src];
                out.d_phi[dst] = -self.d_phi[src];
            }
        }
        out
    }
}

/// Coherent-state expectation fields `⟨Ω|X|Ω⟩` on a fixed grid.
///
/// With real amplitudes `a_k(θ)` the field is `Σ_d S_d(θ) e^{idφ}` where
/// `S_d = Σ_{k'−k=d} a_k a_{k'} X_{kk'}`, so each θ row costs O(N²) once and
/// O(N) per φ node.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    basis: SpinBasis,
    grid: SphereGrid,
    table: AmplitudeTable,
    /// `e^{idφ_l}` at `[(d + N − 1) * n_phi + l]`.
    phases: Vec<C64>,
}

struct RowSums {
    s: Vec<C64>,
    ds: Vec<C64>,
}

impl PhaseSpace {
    pub fn new(basis: SpinBasis, grid: SphereGrid) -> Self {
        let table = AmplitudeTable::new(basis, grid.theta());
        let n = basis.dim();
        let np = grid.n_phi();
        let mut phases = Vec::with_capacity((2 * n - 1) * np);
        for d in -(n as i64 - 1)..=(n as i64 - 1) {
            for &phi in grid.phi() {
                phases.push(C64::from_polar(1.0, d as f64 * phi));
            }
        }
        PhaseSpace {
            basis,
            grid,
            table,
            phases,
        }
    }

    pub fn basis(&self) -> SpinBasis {
        self.basis
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    fn check(&self, x: &CMatrix) -> Result<()> {
        let n = self.basis.dim();
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.nrows(),
            });
        }
        Ok(())
    }

    fn row_sums(&self, x: &CMatrix, i: usize, with_derivative: bool) -> RowSums {
        let n = self.basis.dim();
        let a = &self.table.amps[i];
        let da = &self.table.damps[i];
        let mut s = vec![C64::new(0.0, 0.0); 2 * n - 1];
        let mut ds = vec![C64::new(0.0, 0.0); if with_derivative { 2 * n - 1 } else { 0 }];
        for k in 0..n {
            for kp in 0..n {
                let slot = kp + n - 1 - k;
                let xv = x[(k, kp)];
                s[slot] += xv * (a[k] * a[kp]);
                if with_derivative {
                    ds[slot] += xv * (da[k] * a[kp] + a[k] * da[kp]);
                }
            }
        }
        RowSums { s, ds }
    }

    fn synthesize(&self, coeffs: &[C64], l: usize) -> C64 {
        let np = self.grid.n_phi();
        coeffs
            .iter()
            .enumerate()
            .map(|(slot, &cd)| cd * self.phases[slot * np + l])
            .sum()
    }

    /// `⟨Ω|X|Ω⟩` at every node.
    pub fn field(&self, x: &CMatrix) -> Result<ComplexField> {
        self.check(x)?;
        let np = self.grid.n_phi();
        let rows = map_rows(self.grid.n_theta(), |i| {
            let sums = self.row_sums(x, i, false);
            (0..np).map(|l| self.synthesize(&sums.s, l)).collect::<Vec<_>>()
        });
        Ok(ComplexField {
            values: rows.into_iter().flatten().collect(),
            n_theta: self.grid.n_theta(),
            n_phi: np,
        })
    }

    /// Field plus its analytic θ and φ derivatives.
    pub fn field_with_derivatives(
        &self,
        x: &CMatrix,
    ) -> Result<(ComplexField, ComplexField, ComplexField)> {
        self.check(x)?;
        let n = self.basis.dim() as i64;
        let np = self.grid.n_phi();
        let rows = map_rows(self.grid.n_theta(), |i| {
            let sums = self.row_sums(x, i, true);
            let weighted: Vec<C64> = sums
                .s
                .iter()
                .enumerate()
                .map(|(slot, &v)| v * I * (slot as i64 - (n - 1)) as f64)
                .collect();
            (0..np)
                .map(|l| {
                    (
                        self.synthesize(&sums.s, l),
                        self.synthesize(&sums.ds, l),
                        self.synthesize(&weighted, l),
                    )
                })
                .collect::<Vec<_>>()
        });
        let flat: Vec<(C64, C64, C64)> = rows.into_iter().flatten().collect();
        let wrap = |values: Vec<C64>| ComplexField {
            values,
            n_theta: self.grid.n_theta(),
            n_phi: np,
        };
        Ok((
            wrap(flat.iter().map(|t| t.0).collect()),
            wrap(flat.iter().map(|t| t.1).collect()),
            wrap(flat.iter().map(|t| t.2).collect()),
        ))
    }

    /// Real part of `⟨Ω|X|Ω⟩`, the full value for Hermitian `X`.
    pub fn expectation(&self, x: &CMatrix) -> Result<Vec<f64>> {
        Ok(self.field(x)?.values.iter().map(|z| z.re).collect())
    }

    pub fn husimi(&self, rho: &CMatrix) -> Result<HusimiField> {
        let (q, dq_theta, dq_phi) = self.field_with_derivatives(rho)?;
        let np = self.grid.n_phi();
        let mut values = Vec::with_capacity(q.values.len());
        for (idx, z) in q.values.iter().enumerate() {
            let v = z.re;
            if v < NEGATIVE_Q_TOL || !v.is_finite() {
                return Err(Error::NegativeQ {
                    value: v,
                    theta: self.grid.theta()[idx / np],
                    phi: self.grid.phi()[idx % np],
                });
            }
            values.push(v.max(0.0));
        }
        Ok(HusimiField {
            values,
            d_theta: dq_theta.values.iter().map(|z| z.re).collect(),
            d_phi: dq_phi.values.iter().map(|z| z.re).collect(),
            n_theta: self.grid.n_theta(),
            n_phi: np,
            dim: self.basis.dim(),
        })
    }

    /// `⟨Ω|[op, ρ]|Ω⟩` for the operators with a differential phase-space form.
    pub fn commutator_field(&self, rho: &CMatrix, op: &OperatorMatrix) -> Result<ComplexField> {
        match op.label {
            OperatorLabel::Jplus | OperatorLabel::Jminus | OperatorLabel::Jz | OperatorLabel::Jx => {
            }
            other => return Err(Error::UnsupportedOperator(format!("{other:?}"))),
        }
        let x = &op.matrix * rho - rho * &op.matrix;
        self.field(&x)
    }
}

pub fn husimi(rho: &CMatrix, basis: SpinBasis, grid: &SphereGrid) -> Result<HusimiField> {
    PhaseSpace::new(basis, grid.clone()).husimi(rho)
}

/// `S_Q = −(N/4π) ∮ Q ln Q dΩ`, with `0·ln 0 = 0`.
pub fn wehrl_entropy(q: &HusimiField, grid: &SphereGrid) -> f64 {
    let integrand: Vec<f64> = q
        .values
        .iter()
        .map(|&v| if v > 0.0 { v * v.max(1e-300).ln() } else { 0.0 })
        .collect();
    -(q.dim as f64) / (4.0 * std::f64::consts::PI) * grid.integrate(&integrand)
}

pub fn phase_space_commutator(
    rho: &CMatrix,
    op: &OperatorMatrix,
    basis: SpinBasis,
    grid: &SphereGrid,
) -> Result<ComplexField> {
    PhaseSpace::new(basis, grid.clone()).commutator_field(rho, op)
}

/// The differential forms `𝒥±, 𝒥z, 𝒥x` applied to `Q`, with derivatives taken
/// by fourth-order central differences of step `h` around each node. An
/// independent route to [`phase_space_commutator`].
pub fn differential_commutator_field(
    rho: &CMatrix,
    label: OperatorLabel,
    basis: SpinBasis,
    grid: &SphereGrid,
    h: f64,
) -> Result<ComplexField> {
    if !matches!(
        label,
        OperatorLabel::Jplus | OperatorLabel::Jminus | OperatorLabel::Jz | OperatorLabel::Jx
    ) {
        return Err(Error::UnsupportedOperator(format!("{label:?}")));
    }
    if rho.nrows() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: rho.nrows(),
        });
    }
    let q = |theta: f64, phi: f64| {
        let psi = coherent_state_unchecked(basis, theta, phi);
        (psi.adjoint() * rho * &psi)[(0, 0)].re
    };
    let d = |f: &dyn Fn(f64) -> f64| {
        (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h)
    };
    let np = grid.n_phi();
    let rows = map_rows(grid.n_theta(), |i| {
        let theta = grid.theta()[i];
        let cot = theta.cos() / theta.sin();
        (0..np)
            .map(|l| {
                let phi = grid.phi()[l];
                let dt = d(&|s| q(theta + s, phi));
                let dp = d(&|s| q(theta, phi + s));
                let plus = C64::from_polar(1.0, phi) * (C64::new(dt, 0.0) + I * cot * dp);
                let minus = -C64::from_polar(1.0, -phi) * (C64::new(dt, 0.0) - I * cot * dp);
                match label {
                    OperatorLabel::Jplus => plus,
                    OperatorLabel::Jminus => minus,
                    OperatorLabel::Jz => -I * dp,
                    _ => (plus + minus) * 0.5,
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(ComplexField {
        values: rows.into_iter().flatten().collect(),
        n_theta: grid.n_theta(),
        n_phi: np,
    })
}
