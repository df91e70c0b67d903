use serde::{Deserialize, Serialize};

use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::linalg::frobenius;

/// Peaks lower than this fraction of the tallest one are ignored.
pub const PEAK_FLOOR: f64 = 0.05;

/// Indices of local maxima of a distribution, ignoring negligible ones.
pub fn local_maxima(p: &[f64], rel_floor: f64) -> Vec<usize> {
    let top = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n = p.len();
    (0..n)
        .filter(|&i| {
            let left = if i == 0 { f64::NEG_INFINITY } else { p[i - 1] };
            let right = if i + 1 == n { f64::NEG_INFINITY } else { p[i + 1] };
            p[i] > left && p[i] >= right && p[i] >= rel_floor * top
        })
        .collect()
}

/// Two significant peaks with a dip between them.
pub fn is_bimodal(p: &[f64]) -> bool {
    let peaks = local_maxima(p, PEAK_FLOOR);
    if peaks.len() < 2 {
        return false;
    }
    let (a, b) = (peaks[0], peaks[peaks.len() - 1]);
    let dip = p[a..=b].iter().cloned().fold(f64::INFINITY, f64::min);
    dip < p[a].min(p[b])
}

pub fn is_unimodal(p: &[f64]) -> bool {
    local_maxima(p, PEAK_FLOOR).len() == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NessReport {
    pub is_ness: bool,
    /// Largest `|Π^th + Π^lc − Φ^th|` over the window.
    pub residual: f64,
    /// Largest production/flux magnitude over the window.
    pub max_rate: f64,
    /// Largest finite-difference `‖ρ̇‖_F` over the window.
    pub drift: f64,
}

/// Rates below this are treated as zero when checking the NESS balance.
pub const RATE_FLOOR: f64 = 1e-8;

/// Checks the trailing `window` samples for stationarity: the state must stop
/// moving and the entropy balance `Π^th + Π^lc = Φ^th` must close. Samples
/// whose rates were never evaluated count as non-stationary.
pub fn detect_ness(traj: &TrajectoryRecord, window: usize, tol: f64) -> Result<NessReport> {
    let len = traj.len();
    if window < 2 || window > len {
        return Err(Error::WindowTooLarge { window, len });
    }
    let start = len - window;
    let mut drift = 0.0_f64;
    for i in start..len - 1 {
        let dt = traj.times[i + 1] - traj.times[i];
        let d = frobenius(&(traj.states[i + 1].matrix() - traj.states[i].matrix()));
        drift = drift.max(if dt > 0.0 { d / dt } else { 0.0 });
    }
    let mut residual = 0.0_f64;
    let mut max_rate = 0.0_f64;
    let mut annotated = true;
    for o in &traj.observables[start..] {
        let r = o.pi_th + o.pi_lc - o.phi_th;
        if !r.is_finite() {
            annotated = false;
            continue;
        }
        residual = residual.max(r.abs());
        max_rate = max_rate.max(o.pi_th.abs()).max(o.pi_lc.abs()).max(o.phi_th.abs());
    }
    // At an exact equilibrium every rate is round-off, so the balance is
    // judged against an absolute floor as well.
    let is_ness = annotated && drift < tol && residual <= tol * max_rate.max(RATE_FLOOR);
    Ok(NessReport {
        is_ness,
        residual: if annotated { residual } else { f64::NAN },
        max_rate,
        drift,
    })
}
