use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};
use crate::observables::{ContinuousGrid, MAX_LEVELS, MIN_POINTS};
use crate::operators::{DissipatorParams, LadderOrientation, LocalizationOperator, PotentialParams};
use crate::phasespace::MIN_NODES;

use super::exp::ExpParams;

/// Deepest well accepted; larger depths need far more levels than the
/// truncated basis offers.
pub const CAL_E_CAP: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    SpinStudy,
    LambdaSweep,
    DoubleWellIsolated,
    DoubleWellCombined,
    CouplingSweep,
    LowCoupling,
    SqueezeSweep,
    EigenCompare,
    ExpParams,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 9] = [
        ScenarioKind::SpinStudy,
        ScenarioKind::LambdaSweep,
        ScenarioKind::DoubleWellIsolated,
        ScenarioKind::DoubleWellCombined,
        ScenarioKind::CouplingSweep,
        ScenarioKind::LowCoupling,
        ScenarioKind::SqueezeSweep,
        ScenarioKind::EigenCompare,
        ScenarioKind::ExpParams,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::SpinStudy => "SpinStudy",
            ScenarioKind::LambdaSweep => "LambdaSweep",
            ScenarioKind::DoubleWellIsolated => "DoubleWellIsolated",
            ScenarioKind::DoubleWellCombined => "DoubleWellCombined",
            ScenarioKind::CouplingSweep => "CouplingSweep",
            ScenarioKind::LowCoupling => "LowCoupling",
            ScenarioKind::SqueezeSweep => "SqueezeSweep",
            ScenarioKind::EigenCompare => "EigenCompare",
            ScenarioKind::ExpParams => "ExpParams",
        }
    }

    /// Figure or section each scenario regenerates.
    pub fn figure(self) -> &'static str {
        match self {
            ScenarioKind::SpinStudy => "Fig. 2",
            ScenarioKind::LambdaSweep => "Fig. 3",
            ScenarioKind::DoubleWellIsolated => "Fig. 4 (isolated)",
            ScenarioKind::DoubleWellCombined => "Fig. 4 (dissipative)",
            ScenarioKind::CouplingSweep => "Fig. 5",
            ScenarioKind::LowCoupling => "Fig. 6a-c",
            ScenarioKind::SqueezeSweep => "Fig. 6d-f",
            ScenarioKind::EigenCompare => "Fig. 1c",
            ScenarioKind::ExpParams => "Sec. V",
        }
    }

    /// Four-level spin with `H = ωJz` instead of the double well.
    pub fn is_spin(self) -> bool {
        matches!(self, ScenarioKind::SpinStudy | ScenarioKind::LambdaSweep)
    }

    pub fn is_sweep(self) -> bool {
        matches!(
            self,
            ScenarioKind::LambdaSweep
                | ScenarioKind::CouplingSweep
                | ScenarioKind::LowCoupling
                | ScenarioKind::SqueezeSweep
        )
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid("scenario", format!("unknown scenario `{s}`")))
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Points `lo, lo+step, …` up to `hi`, built from integer multiples so the
/// grid is exactly symmetric about zero.
pub fn linspace_step(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Number of levels N = 2j + 1.
    pub n: usize,
    pub kappa: usize,
    pub potential: PotentialParams,
    pub dissipator: DissipatorParams,
    pub beta_init: f64,
    pub zeta: f64,
    pub integrator: IntegratorConfig,
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Swept values: Λ, coupling γ, or ζ depending on the scenario.
    pub sweep: Vec<f64>,
    /// Λ/γ used where the coupling is swept at a fixed ratio.
    pub lambda_ratio: f64,
    pub ness_window: usize,
    pub ness_tol: f64,
    /// Keep doubling the run length (up to 16τ) until a NESS is detected.
    pub extend_to_ness: bool,
    pub eig_grid: ContinuousGrid,
    pub eig_levels: usize,
    pub exp: ExpParams,
}

impl ScenarioConfig {
    pub fn defaults(scenario: ScenarioKind) -> Self {
        let potential = PotentialParams::default();
        let tau = potential.tau;
        let mut cfg = ScenarioConfig {
            scenario,
            n: 25,
            kappa: 15,
            potential,
            dissipator: DissipatorParams {
                gamma: 0.0,
                lambda: 0.0,
                beta_bath: 1.0,
                localization: LocalizationOperator::BareJx,
                ladder: LadderOrientation::OscillatorLowering,
            },
            beta_init: 2.0,
            zeta: 0.0,
            integrator: IntegratorConfig {
                t_end: tau,
                ..IntegratorConfig::default()
            },
            grid_theta: 64,
            grid_phi: 64,
            sweep: Vec::new(),
            lambda_ratio: 10.0,
            ness_window: 5,
            ness_tol: 1e-4,
            extend_to_ness: false,
            eig_grid: ContinuousGrid::default(),
            eig_levels: 8,
            exp: ExpParams::default(),
        };
        match scenario {
            ScenarioKind::SpinStudy | ScenarioKind::LambdaSweep => {
                cfg.n = 4;
                cfg.dissipator.gamma = 0.5;
                cfg.dissipator.lambda = 0.5;
                cfg.dissipator.ladder = LadderOrientation::SpinLowering;
                cfg.integrator.t_end = 40.0;
                if scenario == ScenarioKind::LambdaSweep {
                    cfg.sweep = logspace(0.05, 50.0, 12);
                    cfg.extend_to_ness = true;
                }
            }
            ScenarioKind::DoubleWellCombined => {
                cfg.dissipator.gamma = 0.5;
                cfg.dissipator.lambda = 0.5;
            }
            ScenarioKind::CouplingSweep => {
                cfg.sweep = logspace(1e-5, 1.0, 6);
            }
            ScenarioKind::LowCoupling => {
                cfg.sweep = vec![1e-3, 1e-2];
                cfg.integrator.t_end = 4.0 * tau;
            }
            ScenarioKind::SqueezeSweep => {
                cfg.dissipator.gamma = 1e-3;
                cfg.dissipator.lambda = 1e-2;
                cfg.sweep = linspace_step(-1.0, 1.0, 0.05);
            }
            ScenarioKind::DoubleWellIsolated
            | ScenarioKind::EigenCompare
            | ScenarioKind::ExpParams => {}
        }
        cfg
    }

    /// Every constraint violation, one message per field.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bad = |field: &str, reason: String| out.push(format!("{field}: {reason}"));
        let positive = |v: f64| v > 0.0 && v.is_finite();

        if self.n < 2 {
            bad("N", format!("need at least 2 levels, got {}", self.n));
        }
        if self.kappa == 0 {
            bad("kappa", "must be >= 1".into());
        }
        let p = &self.potential;
        for (name, v) in [("calE", p.cal_e), ("W", p.w), ("tau", p.tau), ("mass", p.mass), ("omega", p.omega)] {
            if !positive(v) {
                bad(name, format!("must be positive, got {v}"));
            }
        }
        if p.cal_e > CAL_E_CAP {
            bad("calE", format!("{} exceeds the supported depth {CAL_E_CAP}", p.cal_e));
        }
        let d = &self.dissipator;
        if !(d.gamma >= 0.0 && d.gamma.is_finite()) {
            bad("gamma", format!("must be >= 0, got {}", d.gamma));
        }
        if !(d.lambda >= 0.0 && d.lambda.is_finite()) {
            bad("Lambda", format!("must be >= 0, got {}", d.lambda));
        }
        if !positive(d.beta_bath) {
            bad("beta_bath", format!("must be positive, got {}", d.beta_bath));
        }
        if !positive(self.beta_init) {
            bad("beta_init", format!("must be positive, got {}", self.beta_init));
        }
        if !(self.zeta.abs() <= 1.0) {
            bad("zeta", format!("|zeta| must be <= 1, got {}", self.zeta));
        }
        let ic = &self.integrator;
        if !positive(ic.dt) {
            bad("dt", format!("must be positive, got {}", ic.dt));
        }
        if !(ic.t_end >= 0.0 && ic.t_end.is_finite()) {
            bad("t_end", format!("must be >= 0, got {}", ic.t_end));
        }
        if ic.sample_every == 0 {
            bad("sample_every", "must be >= 1".into());
        }
        for (name, v) in [("grid_theta", self.grid_theta), ("grid_phi", self.grid_phi)] {
            if v < MIN_NODES {
                bad(name, format!("need at least {MIN_NODES} nodes, got {v}"));
            }
        }
        if !(self.lambda_ratio >= 0.0 && self.lambda_ratio.is_finite()) {
            bad("lambda_ratio", format!("must be >= 0, got {}", self.lambda_ratio));
        }
        if self.ness_window < 2 {
            bad("ness_window", format!("need at least 2 samples, got {}", self.ness_window));
        }
        if !positive(self.ness_tol) {
            bad("ness_tol", format!("must be positive, got {}", self.ness_tol));
        }

        if self.scenario.is_sweep() {
            if self.sweep.is_empty() {
                bad("sweep", "must not be empty".into());
            } else if self.sweep.windows(2).any(|w| !(w[1] > w[0])) {
                bad("sweep", "values must be strictly increasing".into());
            }
            let ok = |v: f64| match self.scenario {
                ScenarioKind::SqueezeSweep => v.abs() <= 1.0,
                _ => v >= 0.0 && v.is_finite(),
            };
            if let Some(v) = self.sweep.iter().find(|&&v| !ok(v)) {
                bad("sweep", format!("value {v} out of range"));
            }
        }
        if self.scenario == ScenarioKind::EigenCompare {
            if self.eig_grid.n_points < MIN_POINTS {
                bad("eig_points", format!("need at least {MIN_POINTS}, got {}", self.eig_grid.n_points));
            }
            if !positive(self.eig_grid.half_width) {
                bad("eig_half_width", format!("must be positive, got {}", self.eig_grid.half_width));
            }
            if self.eig_levels == 0 || self.eig_levels > MAX_LEVELS.min(self.n) {
                bad("eig_levels", format!("must be in 1..={}", MAX_LEVELS.min(self.n)));
            }
        }
        if self.scenario == ScenarioKind::ExpParams {
            out.extend(self.exp.violations());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }
}
