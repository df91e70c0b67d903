use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_error, CMatrix, I};

/// Spin-j basis `|j, m⟩` with `m = j, j-1, …, -j` (row/column index `k`
/// holds `m = j - k`, which is also the Holstein–Primakoff occupation `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinBasis {
    dim: usize,
}

impl SpinBasis {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBasis(dim));
        }
        Ok(SpinBasis { dim })
    }

    /// Basis for spin `j = two_j / 2`.
    pub fn from_twice_j(two_j: usize) -> Result<Self> {
        Self::new(two_j + 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn j(&self) -> f64 {
        (self.dim as f64 - 1.0) / 2.0
    }

    pub fn two_j(&self) -> usize {
        self.dim - 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorLabel {
    Jz,
    Jplus,
    Jminus,
    Jx,
    Jy,
    Mkappa,
    MkappaInv,
    Jxprime,
    Jyprime,
    Hamiltonian,
    Other,
}

/// A labelled square operator in a spin basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub label: OperatorLabel,
    pub matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(label: OperatorLabel, matrix: CMatrix) -> Self {
        OperatorMatrix { label, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }
}

/// `J_z`, `J_±`, `J_x`, `J_y` in natural units (ħ = 1).
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub basis: SpinBasis,
    pub jz: OperatorMatrix,
    pub jplus: OperatorMatrix,
    pub jminus: OperatorMatrix,
    pub jx: OperatorMatrix,
    pub jy: OperatorMatrix,
}

pub fn build_spin_operators(basis: SpinBasis) -> SpinOperators {
    let n = basis.dim();
    let j = basis.j();
    let jz = CMatrix::from_fn(n, n, |r, col| if r == col { c(basis.m(r)) } else { c(0.0) });
    // J+|j,m⟩ = √((j−m)(j+m+1)) |j,m+1⟩; m+1 sits one index up.
    let jplus = CMatrix::from_fn(n, n, |r, col| {
        if col == r + 1 {
            let m = basis.m(col);
            c(((j - m) * (j + m + 1.0)).sqrt())
        } else {
            c(0.0)
        }
    });
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus) * c(0.5);
    let jy = (&jplus - &jminus) / (I * 2.0);
    SpinOperators {
        basis,
        jz: OperatorMatrix::new(OperatorLabel::Jz, jz),
        jplus: OperatorMatrix::new(OperatorLabel::Jplus, jplus),
        jminus: OperatorMatrix::new(OperatorLabel::Jminus, jminus),
        jx: OperatorMatrix::new(OperatorLabel::Jx, jx),
        jy: OperatorMatrix::new(OperatorLabel::Jy, jy),
    }
}

impl SpinOperators {
    pub fn get(&self, label: OperatorLabel) -> Option<&OperatorMatrix> {
        match label {
            OperatorLabel::Jz => Some(&self.jz),
            OperatorLabel::Jplus => Some(&self.jplus),
            OperatorLabel::Jminus => Some(&self.jminus),
            OperatorLabel::Jx => Some(&self.jx),
            OperatorLabel::Jy => Some(&self.jy),
            _ => None,
        }
    }
}
