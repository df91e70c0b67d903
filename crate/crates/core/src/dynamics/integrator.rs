use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

use super::lindblad::Lindbladian;
use super::state::DensityMatrix;

/// Abort threshold for negative eigenvalues at a sample.
pub const POSITIVITY_ABORT: f64 = -1e-6;

/// RK4 stays stable for `|λ|·dt` up to about 2.8 along both axes; keep a margin.
const STABILITY_LIMIT: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    pub renormalize_trace: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            dt: 1e-3,
            t_end: 10.0,
            sample_every: 100,
            renormalize_trace: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::StepSizeInvalid(self.dt));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid("t_end", format!("must be >= 0, got {}", self.t_end)));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every", "must be positive"));
        }
        Ok(())
    }

    /// Number of nominal steps; `dt` is shrunk slightly so they tile `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

/// Per-sample scalars. Fields not yet computed are NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleObservables {
    pub energy: f64,
    pub s_q: f64,
    pub s_vn: f64,
    pub ds_u: f64,
    pub ds_th: f64,
    pub ds_lc: f64,
    pub pi_th: f64,
    pub phi_th: f64,
    pub pi_lc: f64,
    pub coherence_l1: f64,
    pub fidelity_ref: f64,
    pub trace_err: f64,
    pub min_eig: f64,
}

impl SampleObservables {
    pub fn empty() -> Self {
        SampleObservables {
            energy: f64::NAN,
            s_q: f64::NAN,
            s_vn: f64::NAN,
            ds_u: f64::NAN,
            ds_th: f64::NAN,
            ds_lc: f64::NAN,
            pi_th: f64::NAN,
            phi_th: f64::NAN,
            pi_lc: f64::NAN,
            coherence_l1: f64::NAN,
            fidelity_ref: f64::NAN,
            trace_err: f64::NAN,
            min_eig: f64::NAN,
        }
    }

    /// Values in the column order of the trajectory CSV (after `time`).
    pub fn as_row(&self) -> [f64; 13] {
        [
            self.energy,
            self.s_q,
            self.s_vn,
            self.ds_u,
            self.ds_th,
            self.ds_lc,
            self.pi_th,
            self.phi_th,
            self.pi_lc,
            self.coherence_l1,
            self.fidelity_ref,
            self.trace_err,
            self.min_eig,
        ]
    }
}

#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: Vec<SampleObservables>,
    /// RK4 substeps taken per nominal step to stay inside the stability region.
    pub substeps: usize,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    /// Index of the sample closest to `t`.
    pub fn index_near(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
    }
}

fn rk4_step(l: &Lindbladian, rho: &CMatrix, t: f64, h: f64) -> Result<CMatrix> {
    let h_start = l.hamiltonian_at(t)?;
    let h_mid = l.hamiltonian_at(t + 0.5 * h)?;
    let h_end = l.hamiltonian_at(t + h)?;
    let k1 = l.rhs_with(&h_start, rho)?;
    let k2 = l.rhs_with(&h_mid, &(rho + &k1 * c(0.5 * h)))?;
    let k3 = l.rhs_with(&h_mid, &(rho + &k2 * c(0.5 * h)))?;
    let k4 = l.rhs_with(&h_end, &(rho + &k3 * c(h)))?;
    Ok(rho + (k1 + (k2 + k3) * c(2.0) + k4) * c(h / 6.0))
}

/// Substeps needed so `stiffness·dt/substeps` stays below the RK4 limit.
pub fn stable_substeps(dt: f64, stiffness: f64) -> usize {
    ((dt * stiffness / STABILITY_LIMIT).ceil() as usize).max(1)
}

fn sample(rho: &CMatrix, t: f64, l: &Lindbladian) -> Result<(DensityMatrix, SampleObservables)> {
    let state = DensityMatrix::unchecked(rho.clone(), t);
    let min_eig = state.min_eigenvalue();
    if min_eig < POSITIVITY_ABORT || !min_eig.is_finite() {
        return Err(Error::PositivityViolation {
            time: t,
            min_eigenvalue: min_eig,
        });
    }
    let h = l.hamiltonian_at(t)?;
    let mut obs = SampleObservables::empty();
    obs.energy = (rho * &h).trace().re;
    obs.trace_err = state.trace_error();
    obs.min_eig = min_eig;
    Ok((state, obs))
}

/// Fixed-step RK4 from `rho0.time()` for `cfg.t_end`. Samples are taken at
/// the start, every `sample_every` steps and at the end.
pub fn propagate(
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
    l: &Lindbladian,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    if rho0.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            found: rho0.dim(),
        });
    }
    let t0 = rho0.time();
    let steps = cfg.steps();
    let dt = if steps > 0 { cfg.t_end / steps as f64 } else { cfg.dt };
    let substeps = stable_substeps(dt, l.stiffness_bound());
    let h = dt / substeps as f64;

    let mut record = TrajectoryRecord {
        substeps,
        ..Default::default()
    };
    let mut rho = rho0.matrix().clone();
    let push = |record: &mut TrajectoryRecord, rho: &CMatrix, t: f64| -> Result<()> {
        let (state, obs) = sample(rho, t, l)?;
        record.times.push(t);
        record.states.push(state);
        record.observables.push(obs);
        Ok(())
    };
    push(&mut record, &rho, t0)?;
    for step in 1..=steps {
        let t_prev = t0 + (step - 1) as f64 * dt;
        for sub in 0..substeps {
            rho = rk4_step(l, &rho, t_prev + sub as f64 * h, h)?;
        }
        if cfg.renormalize_trace {
            let tr = rho.trace();
            rho /= tr;
        }
        if step % cfg.sample_every == 0 || step == steps {
            push(&mut record, &rho, t0 + step as f64 * dt)?;
        }
    }
    Ok(record)
}
