use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{scalar_potential, PotentialParams};

pub const MIN_POINTS: usize = 128;
pub const MAX_LEVELS: usize = 12;
const RICHARDSON_TOL: f64 = 1e-2;
const TURNING_MARGIN: f64 = 1.5;

/// Uniform grid on `[−L, L]` with Dirichlet walls at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousGrid {
    pub half_width: f64,
    pub n_points: usize,
}

impl Default for ContinuousGrid {
    fn default() -> Self {
        ContinuousGrid {
            half_width: 8.0,
            n_points: 1024,
        }
    }
}

impl ContinuousGrid {
    fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    /// Interior nodes (walls excluded).
    fn interior(&self) -> Vec<f64> {
        let h = self.spacing();
        (1..self.n_points - 1)
            .map(|i| -self.half_width + i as f64 * h)
            .collect()
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 { d - x } else { d - x - off2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (off.abs() + d.abs()).max(1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of the tridiagonal `(diag, off)` by bisection.
fn lowest_eigenvalues(diag: &[f64], off: f64, k: usize) -> Vec<f64> {
    // Gershgorin bounds
    let lo0 = diag.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0 * off.abs();
    let hi0 = diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0 * off.abs();
    (0..k)
        .map(|level| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm_count(diag, off, mid) > level {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-14 * (1.0 + mid.abs()) {
                    break;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn solve_on(params: &PotentialParams, t: f64, grid: &ContinuousGrid, k: usize) -> Result<Vec<f64>> {
    let h = grid.spacing();
    let kin = 1.0 / (2.0 * params.mass * h * h);
    let diag = grid
        .interior()
        .iter()
        .map(|&x| scalar_potential(params, x, t).map(|v| 2.0 * kin + v))
        .collect::<Result<Vec<_>>>()?;
    Ok(lowest_eigenvalues(&diag, -kin, k))
}

/// Outermost |x| on the grid where `V(x) ≤ e`.
fn turning_point(params: &PotentialParams, t: f64, grid: &ContinuousGrid, e: f64) -> Result<f64> {
    let mut best = 0.0_f64;
    for x in grid.interior() {
        if scalar_potential(params, x, t)? <= e {
            best = best.max(x.abs());
        }
    }
    Ok(best)
}

/// Lowest `k` levels of `p²/2m + V(x, t)` from a second-order finite-difference
/// discretisation with one Richardson extrapolation step (grid halved).
pub fn continuous_eigs(
    params: &PotentialParams,
    t: f64,
    grid: &ContinuousGrid,
    k: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    if !(grid.half_width > 0.0 && grid.half_width.is_finite()) {
        return Err(Error::invalid("half_width", format!("must be positive, got {}", grid.half_width)));
    }
    if grid.n_points < MIN_POINTS {
        return Err(Error::NotConverged(format!(
            "{} grid points, need at least {MIN_POINTS}",
            grid.n_points
        )));
    }
    if k == 0 || k > MAX_LEVELS {
        return Err(Error::NotConverged(format!(
            "requested {k} levels, supported 1..={MAX_LEVELS}"
        )));
    }
    let coarse = solve_on(params, t, grid, k)?;
    let fine_grid = ContinuousGrid {
        half_width: grid.half_width,
        n_points: 2 * grid.n_points - 1,
    };
    let fine = solve_on(params, t, &fine_grid, k)?;
    let out: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    for (level, (r, f)) in out.iter().zip(&fine).enumerate() {
        if (r - f).abs() > RICHARDSON_TOL {
            return Err(Error::NotConverged(format!(
                "level {level}: extrapolation moved by {:.3e}",
                (r - f).abs()
            )));
        }
    }
    let top = out[k - 1];
    let xt = turning_point(params, t, grid, top)?;
    if grid.half_width < TURNING_MARGIN * xt {
        return Err(Error::NotConverged(format!(
            "half width {} too small for turning point {xt:.3}",
            grid.half_width
        )));
    }
    Ok(out)
}
