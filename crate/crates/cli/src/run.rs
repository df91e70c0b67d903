use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use wehrlsim::scenarios::{run_scenario, ScenarioConfig, ScenarioKind, ScenarioOutput};

use crate::error::CliError;
use crate::output;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Convergence status of one run or sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFlag {
    pub output: String,
    /// Sweep parameter, absent for trajectories.
    pub param: Option<f64>,
    pub ness_detected: bool,
    pub ness_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ScenarioConfig,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
    pub flags: Vec<ConvergenceFlag>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Which verb runs which scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Simulate,
    Sweep,
    Eigs,
    ExpParams,
}

impl Verb {
    pub fn accepts(self, kind: ScenarioKind) -> bool {
        use ScenarioKind::*;
        match self {
            Verb::Simulate => matches!(kind, SpinStudy | DoubleWellIsolated | DoubleWellCombined | LowCoupling),
            Verb::Sweep => matches!(kind, LambdaSweep | CouplingSweep | SqueezeSweep),
            Verb::Eigs => kind == EigenCompare,
            Verb::ExpParams => kind == ScenarioKind::ExpParams,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verb::Simulate => "simulate",
            Verb::Sweep => "sweep",
            Verb::Eigs => "eigs",
            Verb::ExpParams => "expparams",
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

/// Runs `cfg`, writes its outputs and the manifest into `out_dir`.
pub fn execute(cfg: &ScenarioConfig, verb: Verb, out_dir: &Path) -> Result<RunManifest, CliError> {
    if !verb.accepts(cfg.scenario) {
        return Err(CliError::Validation(vec![format!(
            "scenario: {} is not run by `{}`",
            cfg.scenario,
            verb.name()
        )]));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let start = Instant::now();
    let result = run_scenario(cfg)?;
    let prefix = cfg.scenario.name();
    let mut files: Vec<(String, String)> = Vec::new();
    let mut flags = Vec::new();
    match &result {
        ScenarioOutput::Runs(runs) => {
            for run in runs {
                let base = format!("{prefix}_{}", slug(&run.label));
                let traj = format!("{base}_trajectory.csv");
                flags.push(ConvergenceFlag {
                    output: traj.clone(),
                    param: None,
                    ness_detected: run.ness.is_ness,
                    ness_residual: finite(run.ness.residual),
                });
                files.push((traj, output::trajectory_csv(run)));
                files.push((format!("{base}_populations.csv"), output::populations_csv(run)));
            }
        }
        ScenarioOutput::Sweeps(tables) => {
            for table in tables {
                let name = format!("{prefix}_{}_sweep.csv", slug(&table.name));
                for row in &table.rows {
                    flags.push(ConvergenceFlag {
                        output: name.clone(),
                        param: Some(row.param),
                        ness_detected: row.ness.is_ness,
                        ness_residual: finite(row.ness.residual),
                    });
                }
                files.push((name, output::sweep_csv(table)));
            }
        }
        ScenarioOutput::Eigen(cmp) => {
            files.push((format!("{prefix}_eigs.csv"), output::eigen_csv(cmp)));
        }
        ScenarioOutput::Exp(r) => {
            let mut json = serde_json::to_string_pretty(r)?;
            json.push('\n');
            files.push(("expparams.json".into(), json));
        }
    }
    for (name, contents) in &files {
        output::write(&out_dir.join(name), contents)?;
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        duration_seconds: start.elapsed().as_secs_f64(),
        outputs: files.into_iter().map(|(n, _)| n).collect(),
        flags,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    output::write(&out_dir.join(MANIFEST_NAME), &json)?;
    Ok(manifest)
}

pub fn list_scenarios() -> String {
    let mut out = String::new();
    for kind in ScenarioKind::ALL {
        out.push_str(&format!("{:<20} → {}\n", kind.name(), kind.figure()));
    }
    out
}

pub fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_has_every_scenario() {
        let s = list_scenarios();
        assert_eq!(s.lines().count(), 9);
        assert!(s.contains("SpinStudy            → Fig. 2"));
        assert!(s.lines().any(|l| l.starts_with("LambdaSweep") && l.ends_with("→ Fig. 3")));
    }

    #[test]
    fn every_scenario_has_one_verb() {
        let verbs = [Verb::Simulate, Verb::Sweep, Verb::Eigs, Verb::ExpParams];
        for kind in ScenarioKind::ALL {
            assert_eq!(verbs.iter().filter(|v| v.accepts(kind)).count(), 1, "{kind}");
        }
    }
}
