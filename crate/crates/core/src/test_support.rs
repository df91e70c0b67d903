use crate::linalg::{trace, CMatrix, C64};

/// Reproducible random density matrix `AA†/tr(AA†)`.
pub(crate) fn random_state(n: usize, seed: u64) -> CMatrix {
    let mut s = seed.wrapping_add(17);
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let a = CMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
    let rho = &a * a.adjoint();
    let tr = trace(&rho);
    rho / tr
}
