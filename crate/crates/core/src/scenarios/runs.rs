use serde::{Deserialize, Serialize};

use crate::dynamics::{
    propagate, squeeze_state, thermal_state, DensityMatrix, IntegratorConfig, Lindbladian,
    SampleObservables, TrajectoryRecord,
};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, HermitianEigen};
use crate::observables::{
    continuous_eigs, fidelity, l1_coherence_in, mixed_state, populations_in, von_neumann_entropy,
};
use crate::operators::{
    build_spin_operators, quadrature_operators, DissipatorParams, DoubleWellHamiltonian,
    HamiltonianProvider, LocalizationOperator, SpinBasis, StaticHamiltonian, ThermalLadder,
};
use crate::linalg::eigvalsh;
use crate::phasespace::{rate_decomposition_with, wehrl_entropy, PhaseSpace, SphereGrid};

use super::analysis::{detect_ness, NessReport};
use super::config::{ScenarioConfig, ScenarioKind};
use super::exp::{compute_exp_params, ExpResults};

/// Longest run allowed when extending towards a NESS, in units of τ.
pub const NESS_CAP_TAUS: f64 = 16.0;

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// A model ready to propagate: generator, initial state and the basis in
/// which populations and coherence are read.
pub struct System {
    pub basis: SpinBasis,
    pub lindbladian: Lindbladian,
    pub rho0: DensityMatrix,
    pub readout: HermitianEigen,
    pub phase_space: PhaseSpace,
}

impl System {
    /// Builds the model named by `cfg.scenario` with the given couplings.
    pub fn new(cfg: &ScenarioConfig, diss: DissipatorParams) -> Result<Self> {
        let basis = SpinBasis::new(cfg.n)?;
        let ops = build_spin_operators(basis);
        let ladder = ThermalLadder::new(&ops, diss.ladder);
        let jxprime = || quadrature_operators(basis, cfg.kappa).map(|q| q.jxprime.matrix);
        let (provider, h_init, readout): (Box<dyn HamiltonianProvider>, CMatrix, CMatrix) =
            if cfg.scenario.is_spin() {
                let h = &ops.jz.matrix * c(cfg.potential.omega);
                (Box::new(StaticHamiltonian::new(h.clone())), h, ops.jz.matrix.clone())
            } else {
                let dw = DoubleWellHamiltonian::new(basis, cfg.kappa, cfg.potential)?;
                let h0 = dw.at(0.0)?.matrix;
                let jx = dw.jxprime().matrix.clone();
                (Box::new(dw), h0, jx)
            };
        let loc = match diss.localization {
            LocalizationOperator::BareJx => ops.jx.matrix.clone(),
            LocalizationOperator::Jxprime => jxprime()?,
        };
        let lindbladian = Lindbladian::new(provider, diss, ladder, loc)?;
        let mut rho0 = thermal_state(&h_init, cfg.beta_init);
        if cfg.zeta != 0.0 {
            rho0 = squeeze_state(&rho0, cfg.zeta, basis, cfg.kappa)?;
        }
        let grid = SphereGrid::new(cfg.grid_theta, cfg.grid_phi)?;
        Ok(System {
            basis,
            lindbladian,
            rho0,
            readout: HermitianEigen::new(&readout),
            phase_space: PhaseSpace::new(basis, grid),
        })
    }

    /// Gibbs state of the bath temperature for the Hamiltonian at time `t`.
    pub fn bath_gibbs(&self, t: f64) -> Result<CMatrix> {
        let h = self.lindbladian.hamiltonian_at(t)?;
        Ok(thermal_state(&h, self.lindbladian.params().beta_bath).into_matrix())
    }

    /// Everything [`SampleObservables`] holds, for one state.
    pub fn observe(&self, state: &DensityMatrix, reference: Option<&CMatrix>) -> Result<SampleObservables> {
        let rho = state.matrix();
        let t = state.time();
        let ps = &self.phase_space;
        let q = ps.husimi(rho)?;
        let rates = rate_decomposition_with(rho, &q, t, &self.lindbladian, ps)?;
        let h = self.lindbladian.hamiltonian_at(t)?;
        Ok(SampleObservables {
            energy: (rho * &h).trace().re,
            s_q: wehrl_entropy(&q, ps.grid()),
            s_vn: von_neumann_entropy(rho),
            ds_u: rates.ds_u,
            ds_th: rates.ds_th,
            ds_lc: rates.ds_lc,
            pi_th: rates.pi_th,
            phi_th: rates.phi_th,
            pi_lc: rates.pi_lc,
            coherence_l1: l1_coherence_in(rho, &self.readout),
            fidelity_ref: match reference {
                Some(r) => fidelity(rho, r)?,
                None => f64::NAN,
            },
            trace_err: state.trace_error(),
            min_eig: state.min_eigenvalue(),
        })
    }

    /// Fills the observables of samples `range` in place.
    pub fn annotate(
        &self,
        traj: &mut TrajectoryRecord,
        range: std::ops::Range<usize>,
        reference: Option<&CMatrix>,
    ) -> Result<()> {
        let states = &traj.states[range.clone()];
        let obs = par_map(states, |s| self.observe(s, reference))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        traj.observables[range].copy_from_slice(&obs);
        Ok(())
    }

    pub fn propagate(&self, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
        propagate(&self.rho0, cfg, &self.lindbladian)
    }

    pub fn populations(&self, traj: &TrajectoryRecord) -> Vec<Vec<f64>> {
        traj.states
            .iter()
            .map(|s| populations_in(s.matrix(), &self.readout))
            .collect()
    }
}

/// One annotated trajectory.
#[derive(Debug, Clone)]
pub struct Run {
    pub label: String,
    pub params: DissipatorParams,
    pub trajectory: TrajectoryRecord,
    /// Per-sample populations in the readout basis (Jz for the spin, Jx' for the well).
    pub populations: Vec<Vec<f64>>,
    pub ness: NessReport,
}

fn full_run(
    cfg: &ScenarioConfig,
    label: &str,
    diss: DissipatorParams,
    reference: impl FnOnce(&System) -> Result<CMatrix>,
) -> Result<Run> {
    let sys = System::new(cfg, diss)?;
    let reference = reference(&sys)?;
    let mut traj = sys.propagate(&cfg.integrator)?;
    let n = traj.len();
    sys.annotate(&mut traj, 0..n, Some(&reference))?;
    let ness = detect_ness(&traj, cfg.ness_window.min(n), cfg.ness_tol)?;
    Ok(Run {
        label: label.to_string(),
        params: diss,
        populations: sys.populations(&traj),
        trajectory: traj,
        ness,
    })
}

/// Thermal-only, localization-only and combined runs of the four-level spin.
/// Fidelity references: bath Gibbs state, the maximally mixed state, and the
/// bath Gibbs state again.
pub fn run_spin_study(cfg: &ScenarioConfig) -> Result<Vec<Run>> {
    cfg.validate()?;
    let d = cfg.dissipator;
    let variants = [
        ("thermal", DissipatorParams { lambda: 0.0, ..d }),
        ("localization", DissipatorParams { gamma: 0.0, ..d }),
        ("combined", d),
    ];
    par_map(&variants, |(label, diss)| {
        full_run(cfg, label, *diss, |sys| {
            if diss.gamma == 0.0 {
                Ok(mixed_state(sys.basis.dim()))
            } else {
                sys.bath_gibbs(0.0)
            }
        })
    })
    .into_iter()
    .collect()
}

/// Double-well protocol; `isolated` switches both dissipators off. The
/// fidelity column tracks overlap with the initial state.
pub fn run_doublewell(cfg: &ScenarioConfig, isolated: bool) -> Result<Run> {
    cfg.validate()?;
    let diss = if isolated {
        DissipatorParams {
            gamma: 0.0,
            lambda: 0.0,
            ..cfg.dissipator
        }
    } else {
        cfg.dissipator
    };
    let label = if isolated { "isolated" } else { "combined" };
    full_run(cfg, label, diss, |sys| Ok(sys.rho0.matrix().clone()))
}

/// Extended runs at `Λ = lambda_ratio·γ` for every γ in `cfg.sweep`.
pub fn run_low_coupling(cfg: &ScenarioConfig) -> Result<Vec<Run>> {
    cfg.validate()?;
    par_map(&cfg.sweep, |&g| {
        let diss = DissipatorParams {
            gamma: g,
            lambda: cfg.lambda_ratio * g,
            ..cfg.dissipator
        };
        full_run(cfg, &format!("gamma={g:e}"), diss, |sys| Ok(sys.rho0.matrix().clone()))
    })
    .into_iter()
    .collect()
}

/// Final-state scalars of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub t_final: f64,
    pub observables: SampleObservables,
    pub ness: NessReport,
}

impl SweepRow {
    pub const COLUMNS: [&'static str; 18] = [
        "sweep_param",
        "t_final",
        "energy",
        "S_Q",
        "S_vN",
        "dS_U",
        "dS_th",
        "dS_lc",
        "Pi_th",
        "Phi_th",
        "Pi_lc",
        "coherence_l1",
        "fidelity_ref",
        "trace_err",
        "min_eig",
        "ness_residual",
        "ness_drift",
        "ness_flag",
    ];

    pub fn as_row(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        out[0] = self.param;
        out[1] = self.t_final;
        out[2..15].copy_from_slice(&self.observables.as_row());
        out[15] = self.ness.residual;
        out[16] = self.ness.drift;
        out[17] = if self.ness.is_ness { 1.0 } else { 0.0 };
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub name: String,
    /// What `sweep_param` holds.
    pub param: String,
    pub rows: Vec<SweepRow>,
    /// Final states in row order.
    #[serde(skip)]
    pub finals: Vec<CMatrix>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = SweepRow::COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.as_row()[k]).collect())
    }
}

/// Propagates to `t_end` and, if asked, keeps doubling the run until a NESS is
/// detected or the 16τ cap is reached. Returns the final state and its report.
fn run_to_final(sys: &System, cfg: &ScenarioConfig) -> Result<(DensityMatrix, NessReport)> {
    let cap = NESS_CAP_TAUS * cfg.potential.tau.max(cfg.integrator.t_end / NESS_CAP_TAUS);
    let mut icfg = cfg.integrator;
    let mut traj = sys.propagate(&icfg)?;
    let window = cfg.ness_window.min(traj.len());
    loop {
        let n = traj.len();
        sys.annotate(&mut traj, n - window..n, None)?;
        let report = detect_ness(&traj, window, cfg.ness_tol)?;
        let last = traj.last_state().cloned().ok_or_else(|| {
            Error::InvalidState("empty trajectory".into())
        })?;
        let elapsed = last.time();
        if !cfg.extend_to_ness || report.is_ness || elapsed >= cap * (1.0 - 1e-12) {
            return Ok((last, report));
        }
        icfg.t_end = elapsed.min(cap - elapsed);
        traj = propagate(&last, &icfg, &sys.lindbladian)?;
    }
}

fn sweep_point(
    cfg: &ScenarioConfig,
    param: f64,
    diss: DissipatorParams,
    reference: impl FnOnce(&System, &DensityMatrix) -> Result<Option<CMatrix>>,
) -> Result<(SweepRow, CMatrix)> {
    let sys = System::new(cfg, diss)?;
    let (last, ness) = run_to_final(&sys, cfg)?;
    let r = reference(&sys, &last)?;
    let observables = sys.observe(&last, r.as_ref())?;
    Ok((
        SweepRow {
            param,
            t_final: last.time(),
            observables,
            ness,
        },
        last.into_matrix(),
    ))
}

fn collect_table(name: &str, param: &str, points: Vec<Result<(SweepRow, CMatrix)>>) -> Result<SweepTable> {
    let (rows, finals) = points.into_iter().collect::<Result<Vec<_>>>()?.into_iter().unzip();
    Ok(SweepTable {
        name: name.to_string(),
        param: param.to_string(),
        rows,
        finals,
    })
}

/// Λ swept at fixed γ on the spin; fidelity against the bath Gibbs state.
pub fn run_lambda_sweep(cfg: &ScenarioConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let points = par_map(&cfg.sweep, |&lambda| {
        let diss = DissipatorParams {
            lambda,
            ..cfg.dissipator
        };
        sweep_point(cfg, lambda, diss, |sys, _| sys.bath_gibbs(0.0).map(Some))
    });
    collect_table("lambda", "Lambda", points)
}

/// Coupling swept over three branches (thermal only, localization only, both
/// at `Λ = lambda_ratio·γ`); fidelity against the isolated final state.
pub fn run_coupling_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepTable>> {
    cfg.validate()?;
    let isolated = {
        let diss = DissipatorParams {
            gamma: 0.0,
            lambda: 0.0,
            ..cfg.dissipator
        };
        let sys = System::new(cfg, diss)?;
        run_to_final(&sys, cfg)?.0.into_matrix()
    };
    let branches: [(&str, fn(f64, f64) -> (f64, f64)); 3] = [
        ("thermal", |g, _| (g, 0.0)),
        ("localization", |g, _| (0.0, g)),
        ("combined", |g, ratio| (g, ratio * g)),
    ];
    let jobs: Vec<(usize, f64)> = (0..3)
        .flat_map(|b| cfg.sweep.iter().map(move |&g| (b, g)))
        .collect();
    let mut results = par_map(&jobs, |&(b, g)| {
        let (gamma, lambda) = branches[b].1(g, cfg.lambda_ratio);
        let diss = DissipatorParams {
            gamma,
            lambda,
            ..cfg.dissipator
        };
        sweep_point(cfg, g, diss, |_, _| Ok(Some(isolated.clone())))
    })
    .into_iter();
    let mut tables = Vec::with_capacity(3);
    for (name, _) in branches {
        let chunk: Vec<_> = results.by_ref().take(cfg.sweep.len()).collect();
        tables.push(collect_table(name, "coupling", chunk)?);
    }
    Ok(tables)
}

/// Squeezing of the initial state swept over `cfg.sweep`; fidelity against
/// the final state of the unsqueezed run.
pub fn run_squeeze_sweep(cfg: &ScenarioConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let unsqueezed = {
        let plain = ScenarioConfig {
            zeta: 0.0,
            ..cfg.clone()
        };
        let sys = System::new(&plain, cfg.dissipator)?;
        run_to_final(&sys, &plain)?.0.into_matrix()
    };
    let points = par_map(&cfg.sweep, |&zeta| {
        let point = ScenarioConfig {
            zeta,
            ..cfg.clone()
        };
        sweep_point(&point, zeta, cfg.dissipator, |_, _| Ok(Some(unsqueezed.clone())))
    });
    collect_table("squeeze", "zeta", points)
}

/// Lowest levels of the truncated spin model and of the continuous solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenComparison {
    pub times: Vec<f64>,
    pub spin: Vec<Vec<f64>>,
    pub continuous: Vec<Vec<f64>>,
}

impl EigenComparison {
    /// Largest `|E_spin − E_cont| / max(|E_cont|, 1)`.
    pub fn max_relative_error(&self) -> f64 {
        self.spin
            .iter()
            .zip(&self.continuous)
            .flat_map(|(s, c)| s.iter().zip(c).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)))
            .fold(0.0, f64::max)
    }
}

/// Compares spectra at `t ∈ {0, τ/2, τ}`.
pub fn run_eigen_compare(cfg: &ScenarioConfig) -> Result<EigenComparison> {
    cfg.validate()?;
    let tau = cfg.potential.tau;
    let times = vec![0.0, 0.5 * tau, tau];
    let dw = DoubleWellHamiltonian::new(SpinBasis::new(cfg.n)?, cfg.kappa, cfg.potential)?;
    let mut spin = Vec::new();
    let mut continuous = Vec::new();
    for &t in &times {
        let mut e = eigvalsh(&dw.at(t)?.matrix);
        e.truncate(cfg.eig_levels);
        spin.push(e);
        continuous.push(continuous_eigs(&cfg.potential, t, &cfg.eig_grid, cfg.eig_levels)?);
    }
    Ok(EigenComparison {
        times,
        spin,
        continuous,
    })
}

pub enum ScenarioOutput {
    Runs(Vec<Run>),
    Sweeps(Vec<SweepTable>),
    Eigen(EigenComparison),
    Exp(ExpResults),
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    Ok(match cfg.scenario {
        ScenarioKind::SpinStudy => ScenarioOutput::Runs(run_spin_study(cfg)?),
        ScenarioKind::DoubleWellIsolated => ScenarioOutput::Runs(vec![run_doublewell(cfg, true)?]),
        ScenarioKind::DoubleWellCombined => ScenarioOutput::Runs(vec![run_doublewell(cfg, false)?]),
        ScenarioKind::LowCoupling => ScenarioOutput::Runs(run_low_coupling(cfg)?),
        ScenarioKind::LambdaSweep => ScenarioOutput::Sweeps(vec![run_lambda_sweep(cfg)?]),
        ScenarioKind::CouplingSweep => ScenarioOutput::Sweeps(run_coupling_sweep(cfg)?),
        ScenarioKind::SqueezeSweep => ScenarioOutput::Sweeps(vec![run_squeeze_sweep(cfg)?]),
        ScenarioKind::EigenCompare => ScenarioOutput::Eigen(run_eigen_compare(cfg)?),
        ScenarioKind::ExpParams => {
            cfg.validate()?;
            ScenarioOutput::Exp(compute_exp_params(&cfg.exp)?)
        }
    })
}
