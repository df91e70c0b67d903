//! Small dense/sparse complex linear-algebra helpers shared by every module.
//!
//! All matrices are dense `nalgebra` matrices of `Complex<f64>`; the few
//! operators that are banded (ladder operators, quadratures) are also kept in
//! coordinate form so the master-equation right-hand side avoids dense
//! products where it can.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Largest elementwise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |m - m†|`, elementwise.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for col in r..n {
            worst = worst.max((m[(r, col)] - m[(col, r)].conj()).norm());
        }
    }
    worst
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// Eigendecomposition of a Hermitian matrix with a reproducible layout:
/// eigenvalues ascending (ties keep solver order), and every eigenvector
/// rotated so its first largest-modulus component is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, aligned with `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        let eig = SymmetricEigen::new(hermitian_part(m));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[a]
                .partial_cmp(&eig.eigenvalues[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut vectors = CMatrix::zeros(n, n);
        let mut values = Vec::with_capacity(n);
        for (dst, &src) in order.iter().enumerate() {
            values.push(eig.eigenvalues[src]);
            let col = eig.eigenvectors.column(src);
            let peak = col.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
            let pivot = col
                .iter()
                .find(|z| z.norm() >= peak * (1.0 - 1e-9))
                .copied()
                .unwrap_or(c(1.0));
            let phase = if pivot.norm() > 0.0 {
                pivot.conj() / pivot.norm()
            } else {
                c(1.0)
            };
            for r in 0..n {
                vectors[(r, dst)] = col[r] * phase;
            }
        }
        HermitianEigen { values, vectors }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(Λ) V†` for a real scalar function.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.map_complex(|x| c(f(x)))
    }

    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for r in 0..n {
                scaled[(r, k)] *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Express `m` in this eigenbasis: `V† m V`.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.vectors.adjoint() * m * &self.vectors
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    HermitianEigen::new(m).values
}

/// Coordinate-format matrix for banded operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseMatrix {
    pub fn from_dense(m: &CMatrix) -> Self {
        let scale = max_abs(m);
        let cutoff = scale * 1e-15;
        let mut entries = Vec::new();
        for col in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, col)];
                if z.norm() > cutoff {
                    entries.push((r, col, z));
                }
            }
        }
        SparseMatrix {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn adjoint(&self) -> Self {
        SparseMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(r, col, z)| (col, r, z.conj()))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for &(r, col, z) in &self.entries {
            m[(r, col)] += z;
        }
        m
    }

    /// `self * m`
    pub fn mul_dense(&self, m: &CMatrix) -> CMatrix {
        let n = m.ncols();
        let mut out = CMatrix::zeros(self.dim, n);
        for &(r, k, z) in &self.entries {
            for col in 0..n {
                out[(r, col)] += z * m[(k, col)];
            }
        }
        out
    }

    /// `m * self`
    pub fn dense_mul(&self, m: &CMatrix) -> CMatrix {
        let rows = m.nrows();
        let mut out = CMatrix::zeros(rows, self.dim);
        for &(k, col, z) in &self.entries {
            for r in 0..rows {
                out[(r, col)] += m[(r, k)] * z;
            }
        }
        out
    }
}

/// Row-major vectorisation `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`; used by tests and
/// small exact propagators.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == c(0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn vectorize(m: &CMatrix) -> CVector {
    let n = m.nrows();
    CVector::from_fn(n * m.ncols(), |idx, _| m[(idx / n, idx % n)])
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, col| v[r * n + col])
}

/// Sum in a fixed pairwise tree so reductions are order-deterministic.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
