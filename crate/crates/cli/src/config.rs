//! Flat `key = value` configuration with environment and flag overrides.

use std::path::Path;

use wehrlsim::operators::{LadderOrientation, LocalizationOperator};
use wehrlsim::scenarios::{ScenarioConfig, ScenarioKind};

use crate::error::CliError;

pub const ENV_PREFIX: &str = "WEHRLSIM_";

/// Every accepted key, in the order they are documented.
pub const KEYS: &[&str] = &[
    "scenario",
    "N",
    "kappa",
    "calE",
    "W",
    "tau",
    "mass",
    "omega",
    "gamma",
    "Lambda",
    "beta_bath",
    "localization",
    "ladder",
    "beta_init",
    "zeta",
    "dt",
    "t_end",
    "sample_every",
    "renormalize_trace",
    "grid_theta",
    "grid_phi",
    "sweep",
    "lambda_ratio",
    "ness_window",
    "ness_tol",
    "extend_to_ness",
    "eig_half_width",
    "eig_points",
    "eig_levels",
    "exp_radius",
    "exp_wavelength",
    "exp_na",
    "exp_epsilon",
    "exp_pressure",
    "exp_temperature",
    "exp_gas_mass",
    "exp_particle_mass",
    "exp_omega",
];

/// One assignment and where it came from; `line` is 0 for env and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

fn canonical_key(raw: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| k.eq_ignore_ascii_case(raw.trim()))
}

fn entry(key: &str, value: &str, line: usize) -> Result<Entry, CliError> {
    let key = canonical_key(key).ok_or_else(|| CliError::Parse {
        line,
        key: key.trim().to_string(),
        reason: "unknown key".into(),
    })?;
    Ok(Entry {
        key: key.to_string(),
        value: value.trim().to_string(),
        line,
    })
}

/// Parses file contents. Blank lines and `#` comments are skipped.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::Parse {
            line: i + 1,
            key: line.to_string(),
            reason: "expected key = value".into(),
        })?;
        out.push(entry(k, v, i + 1)?);
    }
    Ok(out)
}

pub fn parse_file(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_entries(&text)
}

/// `WEHRLSIM_<KEY>` variables from the given environment.
pub fn env_entries(vars: impl IntoIterator<Item = (String, String)>) -> Result<Vec<Entry>, CliError> {
    let mut out: Vec<Entry> = Vec::new();
    let mut vars: Vec<(String, String)> = vars
        .into_iter()
        .filter(|(k, _)| k.starts_with(ENV_PREFIX))
        .collect();
    vars.sort();
    for (k, v) in vars {
        out.push(entry(&k[ENV_PREFIX.len()..], &v, 0)?);
    }
    Ok(out)
}

/// `key=value` strings from `--set`.
pub fn flag_entries(sets: &[String]) -> Result<Vec<Entry>, CliError> {
    sets.iter()
        .map(|s| {
            let (k, v) = s.split_once('=').ok_or_else(|| CliError::Parse {
                line: 0,
                key: s.clone(),
                reason: "expected key=value".into(),
            })?;
            entry(k, v, 0)
        })
        .collect()
}

fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>().map_err(|_| format!("cannot parse `{v}`"))
}

fn flag(v: &str) -> Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

fn list(v: &str) -> Result<Vec<f64>, String> {
    if let Some(spec) = v.strip_prefix("log:") {
        let p: Vec<&str> = spec.split(':').collect();
        if p.len() != 3 {
            return Err("expected log:lo:hi:count".into());
        }
        return Ok(wehrlsim::scenarios::logspace(num(p[0])?, num(p[1])?, num(p[2])?));
    }
    if let Some(spec) = v.strip_prefix("step:") {
        let p: Vec<&str> = spec.split(':').collect();
        if p.len() != 3 {
            return Err("expected step:lo:hi:step".into());
        }
        return Ok(wehrlsim::scenarios::linspace_step(num(p[0])?, num(p[1])?, num(p[2])?));
    }
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| num(s.trim())).collect()
}

fn apply(cfg: &mut ScenarioConfig, key: &str, v: &str) -> Result<(), String> {
    match key {
        "scenario" => {}
        "N" => cfg.n = num(v)?,
        "kappa" => cfg.kappa = num(v)?,
        "calE" => cfg.potential.cal_e = num(v)?,
        "W" => cfg.potential.w = num(v)?,
        "tau" => cfg.potential.tau = num(v)?,
        "mass" => cfg.potential.mass = num(v)?,
        "omega" => cfg.potential.omega = num(v)?,
        "gamma" => cfg.dissipator.gamma = num(v)?,
        "Lambda" => cfg.dissipator.lambda = num(v)?,
        "beta_bath" => cfg.dissipator.beta_bath = num(v)?,
        "localization" => {
            cfg.dissipator.localization = match v.to_ascii_lowercase().as_str() {
                "barejx" | "jx" => LocalizationOperator::BareJx,
                "jxprime" => LocalizationOperator::Jxprime,
                _ => return Err(format!("expected BareJx or Jxprime, got `{v}`")),
            }
        }
        "ladder" => {
            cfg.dissipator.ladder = match v.to_ascii_lowercase().as_str() {
                "spinlowering" => LadderOrientation::SpinLowering,
                "oscillatorlowering" => LadderOrientation::OscillatorLowering,
                _ => return Err(format!("expected SpinLowering or OscillatorLowering, got `{v}`")),
            }
        }
        "beta_init" => cfg.beta_init = num(v)?,
        "zeta" => cfg.zeta = num(v)?,
        "dt" => cfg.integrator.dt = num(v)?,
        "t_end" => cfg.integrator.t_end = num(v)?,
        "sample_every" => cfg.integrator.sample_every = num(v)?,
        "renormalize_trace" => cfg.integrator.renormalize_trace = flag(v)?,
        "grid_theta" => cfg.grid_theta = num(v)?,
        "grid_phi" => cfg.grid_phi = num(v)?,
        "sweep" => cfg.sweep = list(v)?,
        "lambda_ratio" => cfg.lambda_ratio = num(v)?,
        "ness_window" => cfg.ness_window = num(v)?,
        "ness_tol" => cfg.ness_tol = num(v)?,
        "extend_to_ness" => cfg.extend_to_ness = flag(v)?,
        "eig_half_width" => cfg.eig_grid.half_width = num(v)?,
        "eig_points" => cfg.eig_grid.n_points = num(v)?,
        "eig_levels" => cfg.eig_levels = num(v)?,
        "exp_radius" => cfg.exp.radius = num(v)?,
        "exp_wavelength" => cfg.exp.wavelength = num(v)?,
        "exp_na" => cfg.exp.numerical_aperture = num(v)?,
        "exp_epsilon" => cfg.exp.epsilon = num(v)?,
        "exp_pressure" => cfg.exp.pressure = num(v)?,
        "exp_temperature" => cfg.exp.temperature = num(v)?,
        "exp_gas_mass" => cfg.exp.gas_mass = num(v)?,
        "exp_particle_mass" => cfg.exp.particle_mass = num(v)?,
        "exp_omega" => cfg.exp.omega = num(v)?,
        other => return Err(format!("unhandled key `{other}`")),
    }
    Ok(())
}

/// Applies `entries` in order on top of the scenario defaults. The scenario is
/// taken from the last `scenario` entry, else `fallback`. Validation reports
/// every violation at once.
pub fn resolve(entries: &[Entry], fallback: Option<ScenarioKind>) -> Result<ScenarioConfig, CliError> {
    let scenario = match entries.iter().rev().find(|e| e.key == "scenario") {
        Some(e) => e.value.parse::<ScenarioKind>().map_err(|_| CliError::Parse {
            line: e.line,
            key: e.key.clone(),
            reason: format!("unknown scenario `{}`", e.value),
        })?,
        None => fallback.ok_or_else(|| CliError::Validation(vec!["scenario: not set".into()]))?,
    };
    let mut cfg = ScenarioConfig::defaults(scenario);
    for e in entries {
        apply(&mut cfg, &e.key, &e.value).map_err(|reason| CliError::Parse {
            line: e.line,
            key: e.key.clone(),
            reason,
        })?;
    }
    let violations = cfg.violations();
    if violations.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Validation(violations))
    }
}
