use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen};

fn check(rho: &CMatrix, op: &CMatrix) -> Result<()> {
    if rho.nrows() != op.nrows() || rho.ncols() != op.ncols() {
        return Err(Error::DimensionMismatch {
            expected: op.nrows(),
            found: rho.nrows(),
        });
    }
    Ok(())
}

/// `Re tr(ρH)`.
pub fn mean_energy(rho: &CMatrix, h: &CMatrix) -> Result<f64> {
    check(rho, h)?;
    Ok((rho * h).trace().re)
}

/// Sum of off-diagonal moduli of `ρ` in the sorted eigenbasis of `basis_op`.
pub fn l1_coherence(rho: &CMatrix, basis_op: &CMatrix) -> Result<f64> {
    check(rho, basis_op)?;
    let r = HermitianEigen::new(basis_op).to_eigenbasis(rho);
    let n = r.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += r[(i, j)].norm();
            }
        }
    }
    Ok(sum)
}

/// Diagonal of `ρ` in the sorted eigenbasis of `basis_op`.
pub fn populations(rho: &CMatrix, basis_op: &CMatrix) -> Result<Vec<f64>> {
    check(rho, basis_op)?;
    let r = HermitianEigen::new(basis_op).to_eigenbasis(rho);
    Ok((0..r.nrows()).map(|k| r[(k, k)].re).collect())
}

/// Same as [`populations`] with a precomputed eigenbasis.
pub fn populations_in(rho: &CMatrix, eig: &HermitianEigen) -> Vec<f64> {
    let r = eig.to_eigenbasis(rho);
    (0..r.nrows()).map(|k| r[(k, k)].re).collect()
}

pub fn l1_coherence_in(rho: &CMatrix, eig: &HermitianEigen) -> f64 {
    let r = eig.to_eigenbasis(rho);
    let n = r.nrows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| r[(i, j)].norm())
        .sum()
}

/// `−Σ λ ln λ`, skipping (numerically) vanishing eigenvalues.
pub fn von_neumann_entropy(rho: &CMatrix) -> f64 {
    HermitianEigen::new(rho)
        .values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}

const FIDELITY_INPUT_TOL: f64 = -1e-6;

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to [0, 1].
pub fn fidelity(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    check(rho, sigma)?;
    let er = HermitianEigen::new(rho);
    let es = HermitianEigen::new(sigma);
    let worst = er.min().min(es.min());
    if worst < FIDELITY_INPUT_TOL {
        return Err(Error::NonPositiveInput(worst));
    }
    let sqrt_rho = er.map(|v| v.max(0.0).sqrt());
    let inner = &sqrt_rho * sigma * &sqrt_rho;
    let root_trace: f64 = HermitianEigen::new(&inner)
        .values
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum();
    let f = root_trace * root_trace;
    Ok(f.clamp(0.0, 1.0))
}

/// Projector onto eigenvector `k` of `op` (sorted order).
pub fn eigenprojector(op: &CMatrix, k: usize) -> CMatrix {
    let eig = HermitianEigen::new(op);
    let v = eig.vectors.column(k).into_owned();
    &v * v.adjoint()
}

/// The maximally mixed state `I/N`.
pub fn mixed_state(n: usize) -> CMatrix {
    CMatrix::identity(n, n) * c(1.0 / n as f64)
}
