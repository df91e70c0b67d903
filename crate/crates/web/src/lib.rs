//! Browser bindings: the double-well potential and its truncated spectrum,
//! the relaxation of a dissipative spin, and Husimi snapshots of that spin.

use wasm_bindgen::prelude::*;
use wehrlsim::dynamics::IntegratorConfig;
use wehrlsim::linalg::eigvalsh;
use wehrlsim::operators::{build_hamiltonian, scalar_potential, PotentialParams, SpinBasis};
use wehrlsim::scenarios::{ScenarioConfig, ScenarioKind, System};

/// Values per row of [`spin_relaxation`].
pub const RELAXATION_STRIDE: usize = 6;

fn js(e: wehrlsim::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn potential_params(cal_e: f64, w: f64) -> PotentialParams {
    PotentialParams {
        cal_e,
        w,
        ..PotentialParams::default()
    }
}

fn potential_curve(cal_e: f64, w: f64, t: f64, x_max: f64, points: usize) -> wehrlsim::Result<Vec<f64>> {
    let p = potential_params(cal_e, w);
    let points = points.max(2);
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let x = -x_max + 2.0 * x_max * i as f64 / (points - 1) as f64;
        out.push(x);
        out.push(scalar_potential(&p, x, t)?);
    }
    Ok(out)
}

fn levels(n: usize, kappa: usize, cal_e: f64, w: f64, t: f64, count: usize) -> wehrlsim::Result<Vec<f64>> {
    let h = build_hamiltonian(SpinBasis::new(n)?, kappa, potential_params(cal_e, w), t)?;
    let mut e = eigvalsh(&h.matrix);
    e.truncate(count);
    Ok(e)
}

fn spin_system(n: usize, gamma: f64, lambda: f64, beta_bath: f64, grid: usize) -> wehrlsim::Result<(ScenarioConfig, System)> {
    let mut cfg = ScenarioConfig::defaults(ScenarioKind::SpinStudy);
    cfg.n = n;
    cfg.dissipator.gamma = gamma;
    cfg.dissipator.lambda = lambda;
    cfg.dissipator.beta_bath = beta_bath;
    cfg.grid_theta = grid;
    cfg.grid_phi = grid;
    cfg.validate()?;
    let sys = System::new(&cfg, cfg.dissipator)?;
    Ok((cfg, sys))
}

fn relaxation(n: usize, gamma: f64, lambda: f64, beta_bath: f64, t_end: f64) -> wehrlsim::Result<Vec<f64>> {
    let (cfg, sys) = spin_system(n, gamma, lambda, beta_bath, 32)?;
    let icfg = IntegratorConfig {
        t_end,
        sample_every: 200,
        ..cfg.integrator
    };
    let mut traj = sys.propagate(&icfg)?;
    let len = traj.len();
    sys.annotate(&mut traj, 0..len, None)?;
    let mut out = Vec::with_capacity(RELAXATION_STRIDE * len);
    for (t, o) in traj.times.iter().zip(&traj.observables) {
        out.extend([*t, o.s_q, o.ds_u + o.ds_th + o.ds_lc, o.pi_th, o.phi_th, o.pi_lc]);
    }
    Ok(out)
}

fn snapshot(n: usize, gamma: f64, lambda: f64, beta_bath: f64, t: f64, grid: usize) -> wehrlsim::Result<Vec<f64>> {
    let (cfg, sys) = spin_system(n, gamma, lambda, beta_bath, grid)?;
    let icfg = IntegratorConfig {
        t_end: t,
        sample_every: usize::MAX,
        ..cfg.integrator
    };
    let traj = sys.propagate(&icfg)?;
    let rho = traj.last_state().expect("propagation keeps the final state");
    Ok(sys.phase_space.husimi(rho.matrix())?.values)
}

/// `[x₀, V(x₀), x₁, V(x₁), …]` on `points` nodes of `[−x_max, x_max]`.
#[wasm_bindgen]
pub fn potential(cal_e: f64, w: f64, t: f64, x_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    potential_curve(cal_e, w, t, x_max, points).map_err(js)
}

/// Lowest `count` eigenvalues of the truncated spin Hamiltonian at time `t`.
#[wasm_bindgen]
pub fn spin_levels(n: usize, kappa: usize, cal_e: f64, w: f64, t: f64, count: usize) -> Result<Vec<f64>, JsError> {
    levels(n, kappa, cal_e, w, t, count).map_err(js)
}

/// Rows of `t, S_Q, dS_Q/dt, Π_th, Φ_th, Π_lc` for a spin relaxing from the
/// default initial state.
#[wasm_bindgen]
pub fn spin_relaxation(n: usize, gamma: f64, lambda: f64, beta_bath: f64, t_end: f64) -> Result<Vec<f64>, JsError> {
    relaxation(n, gamma, lambda, beta_bath, t_end).map_err(js)
}

/// Husimi function at time `t`, row-major over `grid` θ nodes × `grid` φ nodes.
#[wasm_bindgen]
pub fn husimi_snapshot(n: usize, gamma: f64, lambda: f64, beta_bath: f64, t: f64, grid: usize) -> Result<Vec<f64>, JsError> {
    snapshot(n, gamma, lambda, beta_bath, t, grid).map_err(js)
}
