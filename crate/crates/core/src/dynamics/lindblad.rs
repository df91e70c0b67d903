use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, SparseMatrix, I};
use crate::operators::{
    localization_stiffness, DissipatorParams, HamiltonianProvider, ThermalLadder,
};

use super::state::DensityMatrix;

/// Right-hand side of the master equation with its operators prepared for
/// repeated evaluation. Ladder and localization operators are banded, so only
/// the unitary part needs a dense product.
pub struct Lindbladian {
    hamiltonian: Box<dyn HamiltonianProvider>,
    params: DissipatorParams,
    lowering: SparseMatrix,
    lowering_adj: SparseMatrix,
    lowering_norm: SparseMatrix,
    raising: SparseMatrix,
    raising_adj: SparseMatrix,
    raising_norm: SparseMatrix,
    loc: SparseMatrix,
    loc_sq: SparseMatrix,
    loc_dense: CMatrix,
    stiffness: f64,
}

impl std::fmt::Debug for Lindbladian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lindbladian")
            .field("dim", &self.dim())
            .field("params", &self.params)
            .field("stiffness", &self.stiffness)
            .finish()
    }
}

impl Lindbladian {
    pub fn new(
        hamiltonian: Box<dyn HamiltonianProvider>,
        params: DissipatorParams,
        ladder: ThermalLadder,
        loc_op: CMatrix,
    ) -> Result<Self> {
        params.validate()?;
        let n = hamiltonian.dim();
        for found in [ladder.dim(), loc_op.nrows(), loc_op.ncols()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        let l = &ladder.lowering;
        let r = &ladder.raising;
        let ldl = l.adjoint() * l;
        let rdr = r.adjoint() * r;
        let nbar = params.nbar();
        let op_norm = |m: &CMatrix| crate::linalg::HermitianEigen::new(m).max();
        let thermal_bound =
            2.0 * params.gamma * ((nbar + 1.0) * op_norm(&ldl) + nbar * op_norm(&rdr));
        let stiffness = hamiltonian.spectral_spread()
            + localization_stiffness(params.lambda, &loc_op)
            + thermal_bound;
        Ok(Lindbladian {
            params,
            lowering: SparseMatrix::from_dense(l),
            lowering_adj: SparseMatrix::from_dense(&l.adjoint()),
            lowering_norm: SparseMatrix::from_dense(&ldl),
            raising: SparseMatrix::from_dense(r),
            raising_adj: SparseMatrix::from_dense(&r.adjoint()),
            raising_norm: SparseMatrix::from_dense(&rdr),
            loc: SparseMatrix::from_dense(&loc_op),
            loc_sq: SparseMatrix::from_dense(&(&loc_op * &loc_op)),
            loc_dense: loc_op,
            hamiltonian,
            stiffness,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn params(&self) -> &DissipatorParams {
        &self.params
    }

    pub fn localization_operator(&self) -> &CMatrix {
        &self.loc_dense
    }

    pub fn hamiltonian_at(&self, t: f64) -> Result<CMatrix> {
        self.hamiltonian.hamiltonian(t)
    }

    pub fn provider(&self) -> &dyn HamiltonianProvider {
        self.hamiltonian.as_ref()
    }

    /// Upper bound on the modulus of the generator's spectrum.
    pub fn stiffness_bound(&self) -> f64 {
        self.stiffness
    }

    fn check(&self, rho: &CMatrix) -> Result<()> {
        let n = self.dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.nrows(),
            });
        }
        Ok(())
    }

    /// `−i[H(t), ρ]`
    pub fn unitary(&self, rho: &CMatrix, t: f64) -> Result<CMatrix> {
        self.check(rho)?;
        let h = self.hamiltonian.hamiltonian(t)?;
        Ok(unitary_with(&h, rho))
    }

    pub fn thermal(&self, rho: &CMatrix) -> Result<CMatrix> {
        self.check(rho)?;
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        if self.params.gamma == 0.0 {
            return Ok(out);
        }
        let nbar = self.params.nbar();
        let terms = [
            (&self.lowering, &self.lowering_adj, &self.lowering_norm, nbar + 1.0),
            (&self.raising, &self.raising_adj, &self.raising_norm, nbar),
        ];
        for (o, od, odo, weight) in terms {
            if weight == 0.0 {
                continue;
            }
            let jump = od.dense_mul(&o.mul_dense(rho));
            let anti = odo.mul_dense(rho) + odo.dense_mul(rho);
            out += (jump - anti * c(0.5)) * c(self.params.gamma * weight);
        }
        Ok(out)
    }

    pub fn localization(&self, rho: &CMatrix) -> Result<CMatrix> {
        self.check(rho)?;
        let n = self.dim();
        if self.params.lambda == 0.0 {
            return Ok(CMatrix::zeros(n, n));
        }
        let a_rho = self.loc.mul_dense(rho);
        let a_rho_a = self.loc.dense_mul(&a_rho);
        let dc = self.loc_sq.mul_dense(rho) + self.loc_sq.dense_mul(rho) - a_rho_a * c(2.0);
        Ok(dc * c(-self.params.lambda))
    }

    pub fn rhs(&self, rho: &CMatrix, t: f64) -> Result<CMatrix> {
        let h = self.hamiltonian.hamiltonian(t)?;
        self.rhs_with(&h, rho)
    }

    pub(crate) fn rhs_with(&self, h: &CMatrix, rho: &CMatrix) -> Result<CMatrix> {
        self.check(rho)?;
        let mut out = unitary_with(h, rho);
        if self.params.gamma != 0.0 {
            out += self.thermal(rho)?;
        }
        if self.params.lambda != 0.0 {
            out += self.localization(rho)?;
        }
        Ok(out)
    }
}

fn unitary_with(h: &CMatrix, rho: &CMatrix) -> CMatrix {
    // ρH = (Hρ)† for Hermitian H and ρ.
    let x = h * rho;
    (&x - x.adjoint()) * (-I)
}

pub fn lindblad_rhs(rho: &DensityMatrix, t: f64, lindbladian: &Lindbladian) -> Result<CMatrix> {
    lindbladian.rhs(rho.matrix(), t)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::{commutator, frobenius, hermiticity_error, kron, max_abs, trace, C64};
    use crate::operators::{
        apply_localization_dissipator, apply_thermal_dissipator, build_spin_operators,
        LadderOrientation, LocalizationOperator, SpinBasis, StaticHamiltonian,
    };

    pub(crate) fn spin_lindbladian(dim: usize, gamma: f64, lambda: f64) -> Lindbladian {
        let ops = build_spin_operators(SpinBasis::new(dim).unwrap());
        let params = DissipatorParams {
            gamma,
            lambda,
            beta_bath: 1.0,
            localization: LocalizationOperator::BareJx,
            ladder: LadderOrientation::SpinLowering,
        };
        Lindbladian::new(
            Box::new(StaticHamiltonian::new(ops.jz.matrix.clone())),
            params,
            ThermalLadder::new(&ops, LadderOrientation::SpinLowering),
            ops.jx.matrix.clone(),
        )
        .unwrap()
    }

    fn thermal_jz(dim: usize, beta: f64) -> CMatrix {
        let basis = SpinBasis::new(dim).unwrap();
        let w: Vec<f64> = (0..dim).map(|k| (-beta * basis.m(k)).exp()).collect();
        let z: f64 = w.iter().sum();
        CMatrix::from_fn(dim, dim, |r, col| if r == col { c(w[r] / z) } else { c(0.0) })
    }

    /// Dense row-major superoperator of the full generator.
    fn superoperator(h: &CMatrix, ladder: &ThermalLadder, a: &CMatrix, p: &DissipatorParams) -> CMatrix {
        let n = h.nrows();
        let id = CMatrix::identity(n, n);
        let mut s = (kron(h, &id) - kron(&id, &h.transpose())) * (-I);
        let nbar = p.nbar();
        for (o, w) in [(&ladder.lowering, nbar + 1.0), (&ladder.raising, nbar)] {
            let od = o.adjoint();
            let odo = &od * o;
            let d = kron(o, &o.conjugate()) - (kron(&odo, &id) + kron(&id, &odo.transpose())) * c(0.5);
            s += d * c(p.gamma * w);
        }
        let a2 = a * a;
        let dl = kron(&a2, &id) + kron(&id, &a2.transpose()) - kron(a, &a.transpose()) * c(2.0);
        s -= dl * c(p.lambda);
        s
    }

    #[test]
    fn stationary_without_dissipation() {
        let l = spin_lindbladian(4, 0.0, 0.0);
        let rho = thermal_jz(4, 2.0);
        assert!(max_abs(&l.rhs(&rho, 0.0).unwrap()) < 1e-15);
    }

    #[test]
    fn unitary_part_only() {
        let l = spin_lindbladian(4, 0.0, 0.0);
        let ops = build_spin_operators(SpinBasis::new(4).unwrap());
        let rho = CMatrix::from_fn(4, 4, |r, col| {
            C64::new(0.1 * (r + col) as f64, 0.05 * (r as f64 - col as f64)) + if r == col { c(0.1) } else { c(0.0) }
        });
        let out = l.rhs(&rho, 1.0).unwrap();
        let expect = commutator(&ops.jz.matrix, &rho) * (-I);
        assert!(max_abs(&(&out - expect)) < 1e-14);
        assert!(trace(&out).norm() < 1e-14);
    }

    #[test]
    fn sparse_paths_match_dense_dissipators() {
        let l = spin_lindbladian(5, 0.5, 0.7);
        let ops = build_spin_operators(SpinBasis::new(5).unwrap());
        let ladder = ThermalLadder::new(&ops, LadderOrientation::SpinLowering);
        let rho = thermal_jz(5, 0.4) * c(0.6) + CMatrix::from_element(5, 5, c(0.08));
        let th = apply_thermal_dissipator(&rho, l.params(), &ladder).unwrap();
        let lc = apply_localization_dissipator(&rho, l.params(), &ops.jx.matrix).unwrap();
        assert!(max_abs(&(l.thermal(&rho).unwrap() - th)) < 1e-13);
        assert!(max_abs(&(l.localization(&rho).unwrap() - lc)) < 1e-13);
    }

    #[test]
    fn rhs_matches_superoperator_oracle() {
        let l = spin_lindbladian(4, 0.5, 0.5);
        let ops = build_spin_operators(SpinBasis::new(4).unwrap());
        let ladder = ThermalLadder::new(&ops, LadderOrientation::SpinLowering);
        let rho = thermal_jz(4, 2.0);
        let out = l.rhs(&rho, 0.0).unwrap();
        let s = superoperator(&ops.jz.matrix, &ladder, &ops.jx.matrix, l.params());
        let oracle = crate::linalg::unvectorize(&(s * crate::linalg::vectorize(&rho)), 4);
        assert!(max_abs(&(&out - oracle)) < 1e-13);
        assert!(frobenius(&out) > 0.1);
        assert!(hermiticity_error(&out) < 1e-13);
        assert!(trace(&out).norm() < 1e-13);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let l = spin_lindbladian(4, 0.5, 0.5);
        assert!(matches!(
            l.rhs(&CMatrix::identity(3, 3), 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
