use crate::error::{Error, Result};
use crate::linalg::{c, eigvalsh, hermiticity_error, trace, CMatrix, CVector};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Trace-one, positive semidefinite state with a time tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    time: f64,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, time: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidState(format!(
                "not square: {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_error(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("non-Hermitian by {herm:e}")));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = eigvalsh(&matrix)[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("smallest eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix, time })
    }

    pub(crate) fn unchecked(matrix: CMatrix, time: f64) -> Self {
        DensityMatrix { matrix, time }
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi / c(norm);
        Self::new(&v * v.adjoint(), 0.0)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(n, n) * c(1.0 / n as f64),
            time: 0.0,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace_error(&self) -> f64 {
        (trace(&self.matrix) - c(1.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}
